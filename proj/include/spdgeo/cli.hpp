#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdgeo/error.hpp"
#include "spdgeo/geodesic.hpp"
#include "spdgeo/io.hpp"
#include "spdgeo/means.hpp"
#include "spdgeo/metric.hpp"
#include "spdgeo/shortest.hpp"
#include "spdgeo/verify.hpp"

namespace spdgeo::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumeric = 3 };

namespace detail {

using spdgeo::detail::fmt17;

inline NormSpec parse_norm(const std::string& text) {
  if (text == "hs") return NormSpec::hilbert_schmidt();
  if (text == "op") return NormSpec::operator_norm();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    const std::string tail = text.substr(colon + 1);
    if (head == "schatten") {
      if (tail == "inf") return NormSpec::operator_norm();
      return NormSpec::schatten(spdgeo::detail::parse_double(tail, "Schatten exponent"));
    }
    if (head == "kyfan") {
      const double k = spdgeo::detail::parse_double(tail, "Ky Fan index");
      if (k != std::floor(k) || k < 1 || k > 1e9) throw ParseError("Ky Fan index must be a positive integer");
      return NormSpec::ky_fan(static_cast<int>(k));
    }
  }
  throw ParseError("unknown norm '" + text + "' (expected hs, op, schatten:<p> or kyfan:<k>)");
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  if (out.empty()) throw ParseError("empty list '" + text + "'");
  return out;
}

inline std::vector<SpdMatrix> read_spd_list(const std::vector<std::string>& paths) {
  std::vector<SpdMatrix> out;
  for (const auto& p : paths) {
    for (const auto& m : read_matrices(p)) {
      try {
        out.emplace_back(HermitianMatrix(m));
      } catch (const DomainError& e) {
        throw DomainError("'" + p + "': " + e.what());
      }
    }
  }
  return out;
}

inline void emit_matrix(const CMatrix& m, const std::string& out_path, std::ostream& out) {
  const std::string text = matrix_to_json(m);
  if (out_path.empty()) {
    out << text << '\n';
  } else {
    write_text_file(out_path, text + "\n");
  }
}

inline std::string polyline_json(const Polyline& p) {
  std::string s = "[";
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    if (k) s += ",\n";
    s += matrix_to_json(p.nodes[k]);
  }
  return s + "]\n";
}

inline std::string relation(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  if (std::abs(lhs - rhs) <= 1e-9 * scale) return "=";
  return lhs < rhs ? "<" : ">";
}

inline void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  err << j.dump() << '\n';
}

}  // namespace detail

/// Runs one command line (without the program name). Returns the exit status.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Kernel metrics, geodesics and distances on positive definite matrices", "spdgeo"};
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "print help");

  std::string mean_s, kernel_s, family_s, norm_s = "hs", a_path, b_path, d_path, h_path, k_path, out_path;
  double x = 0, y = 0, t = 0, alpha = 1.0, tol = 1e-12, spread = 2.0;
  std::vector<std::string> inputs;
  int segments = 16, iters = 500, quadrature = 0, n = 3, dim = 3, samples = 200, max_iter = 1000, replay = -1;
  std::uint64_t seed = 0;
  std::string thetas_s, means_s, check_s;
  std::vector<std::string> tolerances;
  bool real = false;

  auto* mean_eval = app.add_subcommand("mean-eval", "evaluate a scalar mean M(x, y)");
  mean_eval->add_option("--mean", mean_s, "mean spec, e.g. stolarsky:2")->required();
  mean_eval->add_option("--x", x)->required();
  mean_eval->add_option("--y", y)->required();

  auto* kernel_eval = app.add_subcommand("kernel-eval", "evaluate a kernel phi(x, y) = M(x, y)^theta");
  kernel_eval->add_option("--kernel", kernel_s, "kernel spec MEAN^THETA")->required();
  kernel_eval->add_option("--x", x)->required();
  kernel_eval->add_option("--y", y)->required();

  auto* metric_eval_c = app.add_subcommand("metric-eval", "kernel metric K_D(H, K)");
  metric_eval_c->add_option("--kernel", kernel_s)->required();
  metric_eval_c->add_option("--d", d_path)->required();
  metric_eval_c->add_option("--h", h_path)->required();
  metric_eval_c->add_option("--k", k_path)->required();

  auto* geodesic = app.add_subcommand("geodesic", "point on a closed-form geodesic");
  geodesic->add_option("--family", family_s, "theta:<t>, alpha:<a>, fisher or commuting")->required();
  geodesic->add_option("--a", a_path)->required();
  geodesic->add_option("--b", b_path)->required();
  geodesic->add_option("--t", t)->required();
  geodesic->add_option("--out", out_path);

  auto* distance = app.add_subcommand("distance", "closed-form geodesic distance");
  distance->add_option("--family", family_s)->required();
  distance->add_option("--norm", norm_s, "hs, op, schatten:<p> or kyfan:<k>");
  distance->add_option("--a", a_path)->required();
  distance->add_option("--b", b_path)->required();

  auto* length = app.add_subcommand("length", "length of the polyline through the given nodes");
  length->add_option("--kernel", kernel_s)->required();
  length->add_option("--path", inputs, "node files in order (a file may hold an array)")->required();
  length->add_option("--norm", norm_s);
  length->add_option("--quadrature", quadrature, "Gauss points per segment");

  auto* shortest = app.add_subcommand("shortest", "numerical shortest-path distance");
  shortest->add_option("--kernel", kernel_s)->required();
  shortest->add_option("--a", a_path)->required();
  shortest->add_option("--b", b_path)->required();
  shortest->add_option("--segments", segments);
  shortest->add_option("--iters", iters);
  shortest->add_option("--seed", seed);
  shortest->add_option("--path-out", out_path, "write the optimised nodes as a JSON array");

  auto* karcher = app.add_subcommand("karcher", "Karcher mean of A_j^alpha, returned as its alpha-th root");
  karcher->add_option("--alpha", alpha);
  karcher->add_option("--inputs", inputs)->required();
  karcher->add_option("--tol", tol);
  karcher->add_option("--max-iter", max_iter);
  karcher->add_option("--out", out_path);

  auto* alm3 = app.add_subcommand("alm3", "Ando-Li-Mathias mean of three matrices");
  alm3->add_option("--inputs", inputs)->required()->expected(3);
  alm3->add_option("--tol", tol);
  alm3->add_option("--out", out_path);

  auto* compare = app.add_subcommand("compare", "delta_{M^theta} against delta_{phi_theta} as CSV");
  compare->add_option("--a", a_path)->required();
  compare->add_option("--b", b_path)->required();
  compare->add_option("--thetas", thetas_s, "comma separated")->required();
  compare->add_option("--means", means_s, "comma separated mean specs")->required();
  compare->add_option("--norm", norm_s);
  compare->add_option("--segments", segments);
  compare->add_option("--iters", iters);

  auto* verify = app.add_subcommand("verify", "run the property suite, one JSON report per line");
  verify->add_option("--check", check_s)->check(CLI::IsMember(check_names()));
  verify->add_option("--seed", seed);
  verify->add_option("--dim", dim);
  verify->add_option("--samples", samples);
  verify->add_option("--sample", replay, "replay a single sample index from a witness");
  verify->add_option("--tol", tolerances, "override a named tolerance, key=value");

  auto* gen = app.add_subcommand("gen", "random SPD matrix");
  gen->add_option("--n", n)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--spread", spread);
  gen->add_flag("--real", real, "real symmetric instead of complex Hermitian");
  gen->add_option("--out", out_path);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (mean_eval->parsed()) {
      out << fmt17(spdgeo::mean_eval(parse_mean(mean_s), x, y)) << '\n';
    } else if (kernel_eval->parsed()) {
      out << fmt17(spdgeo::kernel_eval(parse_kernel(kernel_s), x, y)) << '\n';
    } else if (metric_eval_c->parsed()) {
      const KernelSpec k = parse_kernel(kernel_s);
      const SpdMatrix d = read_spd(d_path);
      out << fmt17(metric_eval(k, d, read_hermitian(h_path), read_hermitian(k_path))) << '\n';
    } else if (geodesic->parsed()) {
      const GeodesicFamily fam = parse_family(family_s);
      emit_matrix(geodesic_point(fam, read_spd(a_path), read_spd(b_path), t).matrix(), out_path, out);
    } else if (distance->parsed()) {
      const GeodesicFamily fam = parse_family(family_s);
      const NormSpec norm = parse_norm(norm_s);
      out << fmt17(closed_form_distance(fam, read_spd(a_path), read_spd(b_path), norm)) << '\n';
    } else if (length->parsed()) {
      const KernelSpec k = parse_kernel(kernel_s);
      const NormSpec norm = parse_norm(norm_s);
      Polyline p;
      for (const auto& m : read_spd_list(inputs)) p.nodes.push_back(m.matrix());
      if (p.nodes.size() < 2) throw PreconditionError("a path needs at least two nodes");
      out << fmt17(curve_length(k, polyline_curve(p), norm, quadrature)) << '\n';
    } else if (shortest->parsed()) {
      const KernelSpec k = parse_kernel(kernel_s);
      PathSearchConfig cfg;
      cfg.segments = segments;
      cfg.max_iterations = iters;
      cfg.seed = seed;
      const PathSearchResult r = numeric_shortest_distance(k, read_spd(a_path), read_spd(b_path), cfg);
      out << "{\"distance\":" << fmt17(r.distance) << ",\"initial_length\":" << fmt17(r.initial_length)
          << ",\"converged\":" << (r.converged ? "true" : "false") << ",\"iterations\":" << r.iterations << "}\n";
      if (!out_path.empty()) write_text_file(out_path, polyline_json(r.path));
    } else if (karcher->parsed()) {
      const KarcherResult r = karcher_mean(read_spd_list(inputs), alpha, tol, max_iter);
      emit_matrix(r.mean.matrix(), out_path, out);
    } else if (alm3->parsed()) {
      const auto m = read_spd_list(inputs);
      if (m.size() != 3) throw PreconditionError("alm3 needs exactly three matrices");
      emit_matrix(alm_3mean(m[0], m[1], m[2], tol).mean.matrix(), out_path, out);
    } else if (compare->parsed()) {
      const NormSpec norm = parse_norm(norm_s);
      const SpdMatrix a = read_spd(a_path), b = read_spd(b_path);
      std::vector<double> thetas;
      for (const auto& s : split_list(thetas_s)) thetas.push_back(spdgeo::detail::parse_double(s, "theta"));
      std::vector<MeanSpec> means;
      for (const auto& s : split_list(means_s)) means.push_back(parse_mean(s));
      PathSearchConfig cfg;
      cfg.segments = segments;
      cfg.max_iterations = iters;
      const bool hs = norm.kind() == NormSpec::Kind::HilbertSchmidt;
      out << "mean,theta,delta_M_theta,delta_phi_theta,relation\n";
      for (const auto& m : means) {
        for (double th : thetas) {
          const KernelSpec k{m, th};
          const double dphi = closed_form_distance(GeodesicFamily::theta(th), a, b, norm);
          // Non-HS norms: the length along the phi_theta geodesic, an upper bound.
          const double dm = hs ? numeric_shortest_distance(k, a, b, cfg).distance
                               : curve_length(k, geodesic_curve(GeodesicFamily::theta(th), a, b), norm);
          out << format_mean(m) << ',' << fmt17(th) << ',' << fmt17(dm) << ',' << fmt17(dphi) << ','
              << relation(dm, dphi) << '\n';
        }
      }
    } else if (verify->parsed()) {
      std::map<std::string, double> overrides;
      for (const auto& kv : tolerances) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("--tol expects key=value, got '" + kv + "'");
        overrides[kv.substr(0, eq)] = spdgeo::detail::parse_double(kv.substr(eq + 1), "tolerance");
      }
      if (check_s.empty() && dim < 2) throw PreconditionError("the suite needs dimension >= 2");
      const std::vector<std::string> names = check_s.empty() ? check_names() : std::vector<std::string>{check_s};
      bool ok = true;
      for (const auto& name : names) {
        CheckSpec spec;
        spec.name = name;
        spec.seed = seed;
        spec.dimension = dim;
        spec.samples = samples;
        if (replay >= 0) spec.replay_sample = replay;
        for (const auto& [key, value] : overrides) {
          if (check_s.empty()) {
            // suite-wide overrides apply where the check knows the key
            const auto& cat = spdgeo::detail::catalog();
            const auto it = std::find_if(cat.begin(), cat.end(), [&](const auto& e) { return name == e.name; });
            if (key != "log_spread" && !it->defaults.count(key)) continue;
          }
          spec.tolerances[key] = value;
        }
        const CheckReport r = run_check(spec);
        out << to_json(r).dump() << '\n' << std::flush;
        ok = ok && r.pass;
      }
      return ok ? kOk : kVerifyFailed;
    } else if (gen->parsed()) {
      emit_matrix(random_spd(n, seed, spread, !real).matrix(), out_path, out);
    }
  } catch (const ParseError& e) {
    error_json(err, e.kind(), e.what());
    auto subs = app.get_subcommands();
    if (!subs.empty()) err << subs.front()->help();
    return kUsage;
  } catch (const Error& e) {
    error_json(err, e.kind(), e.what());
    return kNumeric;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what());
    return kNumeric;
  }
  return kOk;
}

}  // namespace spdgeo::cli
