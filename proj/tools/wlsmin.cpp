// wlsmin: exact smallest-eigenvalue densities, marginals, sampling,
// Tracy-Widom comparison and kicked-top spectra from the command line.

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <mpfr.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wlsmin/wlsmin.hpp"

namespace {

using namespace wlsmin;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3 };

struct Common {
  std::string out;
  std::string manifest;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "output file (default: stdout)");
  sub->add_option("--manifest", c.manifest, "sidecar manifest path (default: <out>.manifest.json)");
  sub->add_option("--format", c.format, "grid output format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + c.out + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  f << text;
}

std::string exact_str(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

/// Integer, "a/b" or plain decimal, read exactly.
Rational parse_rational(const std::string& s) {
  const auto dot = s.find('.');
  Rational q;
  if (dot == std::string::npos) {
    if (q.set_str(s, 10) != 0) throw DomainError("not a rational number: '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  BigInt num;
  if (digits.empty() || num.set_str(digits, 10) != 0) throw DomainError("not a decimal number: '" + s + "'");
  return ratio(num, ipow(BigInt(10), s.size() - dot - 1));
}

std::string grid_text(const GridDensity& g, const std::string& format) {
  return format == "json" ? to_json(g).dump(2) + "\n" : to_csv(g);
}

GridDensity sample_grid(const std::vector<double>& xs, const std::string& kind, const EnsembleParams& p,
                        const std::function<double(double)>& f) {
  GridDensity g;
  g.kind = kind;
  g.params = p;
  for (double x : xs) {
    g.xs.push_back(x);
    g.ys.push_back(f(x));
  }
  return g;
}

Json versions() {
  return {{"wlsmin", kVersion},
          {"gmp", gmp_version},
          {"mpfr", mpfr_get_version()},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                        std::to_string(BOOST_VERSION % 100)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact smallest-eigenvalue statistics for complex Wishart-Laguerre and fixed-trace ensembles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int n = 0, m = 0;
  auto add_nm = [&](CLI::App* sub) {
    sub->add_option("--n", n, "matrix dimension n")->required();
    sub->add_option("--m", m, "degrees of freedom m >= n")->required();
  };

  // density
  Common c_density;
  std::string grid_spec, exact_at;
  auto* density = app.add_subcommand("density", "exact regular smallest-eigenvalue density");
  add_nm(density);
  add_common(density, c_density);
  density->add_option("--grid", grid_spec, "sample the density on a:b:N");
  density->add_option("--exact-at", exact_at, "exact value at a rational point (e.g. 1/2 or 0.25)");

  // ft-density
  Common c_ft;
  std::optional<double> r_delta_arg;
  auto* ft = app.add_subcommand("ft-density", "exact fixed-trace smallest-eigenvalue density");
  add_nm(ft);
  add_common(ft, c_ft);
  ft->add_option("--grid", grid_spec, "sample the density on a:b:N");
  ft->add_option("--exact-at", exact_at, "exact value at a rational point");
  ft->add_option("--r-delta", r_delta_arg, "also report R(delta) = P(x_min > 1/n - delta)");

  // moments
  Common c_mom;
  std::string eta_text = "1";
  bool fixed_trace = false;
  auto* moments = app.add_subcommand("moments", "moment <x_min^eta>");
  add_nm(moments);
  add_common(moments, c_mom);
  moments->add_option("--eta", eta_text, "moment order (integers give exact rationals)")->required();
  moments->add_flag("--fixed-trace", fixed_trace, "fixed-trace ensemble");

  // marginal
  Common c_marg;
  std::string marginal_kind = "regular";
  auto* marginal = app.add_subcommand("marginal", "one-level eigenvalue density");
  add_nm(marginal);
  add_common(marginal, c_marg);
  marginal->add_option("--grid", grid_spec, "a:b:N")->required();
  marginal->add_option("--kind", marginal_kind, "regular | fixed-trace | scaled | mp")
      ->check(CLI::IsMember({"regular", "fixed-trace", "scaled", "mp"}));

  // mc
  Common c_mc;
  long count = 10000;
  std::uint64_t seed = 1;
  int bins = 0;
  std::string hist_out;
  bool with_ks = false;
  auto* mc = app.add_subcommand("mc", "Monte Carlo smallest eigenvalues");
  add_nm(mc);
  add_common(mc, c_mc);
  mc->add_option("--count", count, "number of matrices")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "64-bit seed");
  mc->add_flag("--fixed-trace", fixed_trace, "divide by the trace");
  mc->add_option("--bins", bins, "histogram bins (written to --hist-out)")->check(CLI::Range(2, 1000000));
  mc->add_option("--hist-out", hist_out, "histogram CSV path");
  mc->add_flag("--ks", with_ks, "record the KS statistic against the closed form in the manifest");

  // tw
  Common c_tw;
  int tw_nodes = 64;
  auto* tw = app.add_subcommand("tw", "Tracy-Widom comparison of the rescaled smallest eigenvalue");
  add_nm(tw);
  add_common(tw, c_tw);
  tw->add_option("--grid", grid_spec, "a:b:N within [-10, 6]")->required();
  tw->add_option("--nodes", tw_nodes, "Gauss-Legendre nodes for the Fredholm determinant")->check(CLI::Range(8, 512));

  // kicked
  Common c_kick;
  int n1 = 11, n2 = 21;
  double j1 = -1, j2 = -1;
  double k1 = 7, k2 = 8, eps = 1;
  CoherentAngles a1 = default_angles(0).first, a2 = default_angles(0).second;
  RunProtocol proto;
  std::string summary_out;
  bool seedless = true;
  auto* kicked = app.add_subcommand("kicked", "coupled kicked tops Schmidt spectra");
  add_common(kicked, c_kick);
  kicked->add_option("--N1", n1, "dimension 2 j1 + 1 of the first top");
  kicked->add_option("--N2", n2, "dimension 2 j2 + 1 of the second top");
  kicked->add_option("--j1", j1, "spin of the first top (overrides --N1)");
  kicked->add_option("--j2", j2, "spin of the second top (overrides --N2)");
  kicked->add_option("--k1", k1, "kick strength of top 1");
  kicked->add_option("--k2", k2, "kick strength of top 2");
  kicked->add_option("--eps", eps, "coupling");
  kicked->add_option("--theta1", a1.theta0);
  kicked->add_option("--phi1", a1.phi0);
  kicked->add_option("--theta2", a2.theta0);
  kicked->add_option("--phi2", a2.phi0);
  kicked->add_option("--skip", proto.skip, "transient periods dropped")->check(CLI::NonNegativeNumber);
  kicked->add_option("--stride", proto.stride, "periods between recorded states")->check(CLI::PositiveNumber);
  kicked->add_option("--count", proto.count, "number of spectra")->check(CLI::PositiveNumber);
  kicked->add_option("--summary", summary_out, "summary JSON path");
  kicked->add_flag("--seedless", seedless, "accepted for clarity; this pipeline uses no random numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Json manifest;
  manifest["versions"] = versions();
  Json flags = Json::object();
  for (const auto* sub : app.get_subcommands()) {
    manifest["subcommand"] = sub->get_name();
    for (const auto* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->count() == 0) continue;
      flags[opt->get_name()] = opt->as<std::string>();
    }
  }
  manifest["flags"] = flags;
  const CLI::App* active = app.get_subcommands().front();
  const Common* common = active == density ? &c_density
                         : active == ft    ? &c_ft
                         : active == moments ? &c_mom
                         : active == marginal ? &c_marg
                         : active == mc       ? &c_mc
                         : active == tw       ? &c_tw
                                              : &c_kick;
  Json results = Json::object();

  try {
    if (active == density) {
      const auto form = smin_closed_form(EnsembleParams(n, m));
      std::string text = to_json(form).dump(2) + "\n";
      if (!exact_at.empty()) {
        const Rational x = parse_rational(exact_at);
        if (x < 0) throw DomainError("--exact-at requires x >= 0");
        Json ex = {{"x", exact_str(x)},
                   {"polynomial_factor", exact_str(form.polynomial_part()(x))},
                   {"exp_argument", exact_str(Rational(-n) * x)},
                   {"value", format_double(form.eval(x.get_d()))}};
        Json doc = to_json(form);
        doc["exact_at"] = ex;
        text = doc.dump(2) + "\n";
      }
      if (!grid_spec.empty()) {
        const auto g = sample_grid(GridSpec::parse(grid_spec).nodes(), "regular-smin", form.params(),
                                   [&](double x) { return x < 0 ? 0.0 : form.eval(x); });
        text += grid_text(g, common->format);
      }
      emit(*common, text);
    } else if (active == ft) {
      const auto form = ft_closed_form(EnsembleParams(n, m));
      Json doc = to_json(form);
      if (!exact_at.empty()) {
        const Rational x = parse_rational(exact_at);
        if (x < 0) throw DomainError("--exact-at requires x >= 0");
        const Rational value = x * n > 1 ? Rational(0) : form.polynomial()(x);
        doc["exact_at"] = {{"x", exact_str(x)}, {"value_exact", exact_str(value)}};
      }
      if (r_delta_arg) {
        doc["r_delta"] = {{"delta", format_double(*r_delta_arg)}, {"value", format_double(r_delta(form, *r_delta_arg))}};
      }
      std::string text = doc.dump(2) + "\n";
      if (!grid_spec.empty()) {
        const auto g = sample_grid(GridSpec::parse(grid_spec).nodes(), "fixed-trace-smin", form.params(),
                                   [&](double x) { return form.eval(x); });
        text += grid_text(g, common->format);
      }
      emit(*common, text);
    } else if (active == moments) {
      const EnsembleParams p(n, m);
      const double eta_value = std::stod(eta_text);
      const MomentOrder eta(eta_value);
      eta.check_admissible(p);
      const auto form = smin_closed_form(p);
      Json doc = {{"n", n}, {"m", m}, {"eta", eta_text}, {"kind", fixed_trace ? "fixed-trace" : "regular"}};
      if (eta.is_integer()) {
        const long e = static_cast<long>(eta_value);
        const Rational v = fixed_trace ? ft_moment_exact(FTSminClosedForm(form), e) : moment_exact(form, e);
        doc["exact"] = exact_str(v);
        doc["value"] = format_double(v.get_d());
      } else {
        doc["value"] = format_double(fixed_trace ? ft_moment(FTSminClosedForm(form), eta) : moment(form, eta));
      }
      emit(*common, doc.dump(2) + "\n");
    } else if (active == marginal) {
      const EnsembleParams p(n, m);
      const auto xs = GridSpec::parse(grid_spec).nodes();
      GridDensity g;
      if (marginal_kind == "regular") {
        g = sample_grid(xs, "marginal-regular", p, [&](double x) { return x < 0 ? 0.0 : marginal_regular(p, x); });
      } else if (marginal_kind == "fixed-trace") {
        const FixedTraceMarginal pf(p);
        g = sample_grid(xs, "marginal-fixed-trace", p, [&](double x) { return x < 0 || x >= 1 ? 0.0 : pf(x); });
      } else if (marginal_kind == "scaled") {
        g = sample_grid(xs, "marginal-scaled", p, [&](double x) { return x < 0 ? 0.0 : marginal_scaled(p, x); });
      } else {
        g = sample_grid(xs, "marginal-mp", p, [&](double x) { return marginal_mp(p, x); });
      }
      emit(*common, grid_text(g, common->format));
    } else if (active == mc) {
      const EnsembleParams p(n, m);
      const SampleSet s = smallest_eig_samples(p, count, seed, fixed_trace);
      emit(*common, to_csv(s));
      if (bins > 0) {
        if (hist_out.empty()) throw DomainError("--bins needs --hist-out");
        write_file(hist_out, to_csv(histogram(s, bins)));
      }
      results["mean"] = format_double(sample_mean(s.values));
      if (with_ks) {
        const auto form = smin_closed_form(p);
        if (fixed_trace) {
          const FTSminClosedForm f(form);
          results["ks"] = format_double(ks_statistic(s, [&](double x) { return f.cdf(x); }));
        } else {
          results["ks"] = format_double(ks_statistic(s, [&](double x) { return form.cdf(x); }));
        }
      }
    } else if (active == tw) {
      const EnsembleParams p(n, m);
      const auto sc = tw_scaling(p);
      const auto xs = GridSpec::parse(grid_spec).nodes();
      TWOptions opt;
      opt.nodes = tw_nodes;
      const auto t = tw2_density(xs, opt);
      const auto form = smin_closed_form(p);
      const auto reg = rescaled_smin_density(form, sc, xs);
      const auto fix = rescaled_smin_density(FTSminClosedForm(form), sc, xs);
      std::ostringstream os;
      if (common->format == "json") {
        Json doc = {{"n", n}, {"m", m}, {"eta_shift", sc.eta_shift}, {"sigma", sc.sigma},
                    {"x", xs}, {"tw2", t.ys}, {"regular", reg.ys}, {"fixed_trace", fix.ys}};
        os << doc.dump(2) << '\n';
      } else {
        os << "x,tw2,regular,fixed_trace\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
          os << format_double(xs[i]) << ',' << format_double(t.ys[i]) << ',' << format_double(reg.ys[i]) << ','
             << format_double(fix.ys[i]) << '\n';
        }
      }
      emit(*common, os.str());
      results["eta_shift"] = format_double(sc.eta_shift);
      results["sigma"] = format_double(sc.sigma);
      results["sup_distance_regular"] = format_double(reg.max_abs_difference(t));
      results["sup_distance_fixed_trace"] = format_double(fix.max_abs_difference(t));
    } else {
      TopParams tp;
      tp.j1 = j1 > 0 ? Spin{static_cast<int>(std::lround(2 * j1))} : Spin::from_dim(n1);
      tp.j2 = j2 > 0 ? Spin{static_cast<int>(std::lround(2 * j2))} : Spin::from_dim(n2);
      if ((j1 > 0 && std::abs(2 * j1 - tp.j1.twice) > 1e-12) || (j2 > 0 && std::abs(2 * j2 - tp.j2.twice) > 1e-12)) {
        throw DomainError("spins must be half-integers");
      }
      tp.k1 = k1;
      tp.k2 = k2;
      tp.eps = eps;
      tp.validate();
      const auto run = run_ensemble(tp, a1, a2, proto);
      std::ostringstream os;
      os << "# N1=" << tp.n1() << " N2=" << tp.n2() << " k1=" << format_double(k1) << " k2=" << format_double(k2)
         << " eps=" << format_double(eps) << '\n';
      for (int i = 0; i < tp.n1(); ++i) os << (i ? "," : "") << "mu" << i + 1;
      os << '\n';
      std::vector<double> smallest;
      for (const auto& s : run.spectra) {
        for (std::size_t i = 0; i < s.mu.size(); ++i) os << (i ? "," : "") << format_double(s.mu[i]);
        os << '\n';
        smallest.push_back(s.smallest());
      }
      emit(*common, os.str());
      const auto form = ft_closed_form(EnsembleParams(tp.n1(), tp.n2()));
      Json summary = {{"N1", tp.n1()},
                      {"N2", tp.n2()},
                      {"spectra", run.spectra.size()},
                      {"renormalizations", run.renormalizations},
                      {"max_norm_drift", format_double(run.max_norm_drift)},
                      {"ks_smallest_vs_fixed_trace", format_double(ks_statistic(smallest, [&](double x) {
                         return form.cdf(x);
                       }))}};
      results = summary;
      if (!summary_out.empty()) write_file(summary_out, summary.dump(2) + "\n");
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "wlsmin: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "wlsmin: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "wlsmin: invalid argument: " << e.what() << '\n';
    return kUsage;
  }

  manifest["results"] = results;
  manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string mpath = common->manifest;
  if (mpath.empty()) mpath = common->out.empty() ? "wlsmin-" + active->get_name() + ".manifest.json" : common->out + ".manifest.json";
  try {
    write_file(mpath, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "wlsmin: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
