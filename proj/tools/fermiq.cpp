// fermiq: verification harness and expression evaluator for the fermionic
// deformation-quantisation library. `fermiq verify` runs the identity suites
// and emits a machine-readable report; `fermiq eval` applies a single
// operation described by a JSON file. Exit codes: 0 pass, 1 check failure,
// 2 configuration or I/O error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermion/json_io.hpp"
#include "fermion/sections.hpp"
#include "fermion/star.hpp"
#include "fermion/transport.hpp"
#include "fermion/verify.hpp"

namespace {

using fermion::json;
using namespace fermion;

json scalar_json(const Cplx& v) { return json{{"re", v.real()}, {"im", v.imag()}}; }
json scalar_json(const LaurentPoly& v) {
  json lp = json::object();
  for (const auto& [e, c] : v.terms()) lp[std::to_string(e)] = json::array({c.re.value(), c.im.value()});
  return json{{"laurent", std::move(lp)}};
}

SqMat<LaurentPoly> exact_matrix(const MatrixXcd& m) {
  SqMat<LaurentPoly> out(static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out(i, j) = LaurentPoly(CRational::from_doubles(m(i, j).real(), m(i, j).imag()));
  return out;
}

SqMat<LaurentPoly> exact_matrix_real(const MatrixXd& m) {
  return exact_matrix(m.cast<Cplx>());
}

int run_eval(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "cannot open " << file << "\n";
    return 2;
  }
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "json parse error in " << file << ": " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string op = j.at("op").get<std::string>();
    const json& a = j.value("args", json::object());
    json out;

    auto need = [&](const char* key) -> const json& {
      if (!a.contains(key))
        throw std::invalid_argument(std::string("args.") + key + ": missing");
      return a.at(key);
    };
    auto get_mv = [&](const char* key) { return parse_multivector(need(key), std::string("args.") + key); };

    auto dump_any = [&](const ParsedMultivector& like, const MultivectorC& numeric,
                        const MultivectorF& exact, bool clifford = false) {
      return like.formal ? dump_multivector(exact, clifford)
                         : dump_multivector(numeric, like.hbar, clifford);
    };

    if (op == "wedge" || op == "tensor_embed") {
      auto f = get_mv("a"), g = get_mv("b");
      if (f.formal != g.formal) throw std::invalid_argument("args: mixed scalar modes");
      if (op == "wedge")
        out = f.formal ? dump_multivector(wedge(f.exact, g.exact))
                       : dump_multivector(wedge(f.numeric, g.numeric), f.hbar);
      else
        out = f.formal ? dump_multivector(tensor_embed(f.exact, g.exact))
                       : dump_multivector(tensor_embed(f.numeric, g.numeric), f.hbar);
    } else if (op == "fermi_derivative" || op == "signed_derivative") {
      auto f = get_mv("f");
      const int mu = need("mu").get<int>() - 1;  // 1-based in the schema
      if (op == "fermi_derivative")
        out = dump_any(f, f.formal ? MultivectorC(1) : fermi_derivative(f.numeric, mu),
                       f.formal ? fermi_derivative(f.exact, mu) : MultivectorF(1));
      else
        out = dump_any(f, f.formal ? MultivectorC(1) : signed_derivative(f.numeric, mu),
                       f.formal ? signed_derivative(f.exact, mu) : MultivectorF(1));
    } else if (op == "berezin_integral") {
      auto f = get_mv("f");
      out = f.formal ? scalar_json(berezin_integral(f.exact))
                     : scalar_json(berezin_integral(f.numeric));
    } else if (op == "exp_even") {
      auto f = get_mv("f");
      out = dump_any(f, f.formal ? MultivectorC(1) : exp_even(f.numeric),
                     f.formal ? exp_even(f.exact) : MultivectorF(1));
    } else if (op == "diagonal_pullback" || op == "graded_flip") {
      auto f = get_mv("f");
      if (op == "diagonal_pullback")
        out = dump_any(f, f.formal ? MultivectorC(1) : diagonal_pullback(f.numeric),
                       f.formal ? diagonal_pullback(f.exact) : MultivectorF(1));
      else
        out = dump_any(f, f.formal ? MultivectorC(1) : graded_flip(f.numeric),
                       f.formal ? graded_flip(f.exact) : MultivectorF(1));
    } else if (op == "poisson_bracket") {
      auto f = get_mv("f"), g = get_mv("g");
      MatrixXd qs = parse_real_matrix(need("qsharp"), "args.qsharp");
      if (f.formal)
        out = dump_multivector(poisson_bracket(f.exact, g.exact, exact_matrix_real(qs)));
      else
        out = dump_multivector(poisson_bracket(f.numeric, g.numeric, to_sqmat_real(qs)), f.hbar);
    } else if (op == "star_k") {
      auto f = get_mv("f"), g = get_mv("g");
      MatrixXd qs = parse_real_matrix(need("qsharp"), "args.qsharp");
      MatrixXcd k = parse_complex_matrix(need("k"), "args.k");
      if (f.formal)
        out = dump_multivector(star_k(f.exact, g.exact, exact_matrix_real(qs), exact_matrix(k),
                                      LaurentPoly::hbar()));
      else
        out = dump_multivector(
            star_k(f.numeric, g.numeric, to_sqmat_real(qs), to_sqmat(k), Cplx(f.hbar)), f.hbar);
    } else if (op == "intertwine") {
      auto f = get_mv("f");
      MatrixXcd k0 = parse_complex_matrix(need("k_from"), "args.k_from");
      MatrixXcd k1 = parse_complex_matrix(need("k_to"), "args.k_to");
      if (f.formal)
        out = dump_multivector(
            intertwine(f.exact, exact_matrix(k0), exact_matrix(k1), LaurentPoly::hbar()));
      else
        out = dump_multivector(intertwine(f.numeric, to_sqmat(k0), to_sqmat(k1), Cplx(f.hbar)),
                               f.hbar);
    } else if (op == "clifford_mul") {
      auto x = get_mv("x"), y = get_mv("y");
      MatrixXd qs = parse_real_matrix(need("qsharp"), "args.qsharp");
      if (x.formal)
        out = dump_multivector(
            clifford_mul(CliffordF(x.exact), CliffordF(y.exact), exact_matrix_real(qs),
                         LaurentPoly::hbar())
                .c,
            true);
      else
        out = dump_multivector(clifford_mul(CliffordC(x.numeric), CliffordC(y.numeric),
                                            to_sqmat_real(qs), Cplx(x.hbar))
                                   .c,
                               x.hbar, true);
    } else if (op == "quantize" || op == "symbol") {
      auto f = get_mv("f");
      MatrixXd qs = parse_real_matrix(need("qsharp"), "args.qsharp");
      MatrixXcd k = parse_complex_matrix(need("k"), "args.k");
      if (f.formal) {
        auto kk = exact_matrix(k);
        auto qq = exact_matrix_real(qs);
        out = op == "quantize"
                  ? dump_multivector(quantize(f.exact, kk, qq, LaurentPoly::hbar()).c, true)
                  : dump_multivector(symbol(CliffordF(f.exact), kk, qq, LaurentPoly::hbar()));
      } else {
        auto kk = to_sqmat(k);
        auto qq = to_sqmat_real(qs);
        out = op == "quantize"
                  ? dump_multivector(quantize(f.numeric, kk, qq, Cplx(f.hbar)).c, f.hbar, true)
                  : dump_multivector(symbol(CliffordC(f.numeric), kk, qq, Cplx(f.hbar)), f.hbar);
      }
    } else if (op == "supertrace") {
      auto x = get_mv("x");
      out = x.formal ? scalar_json(supertrace(CliffordF(x.exact), LaurentPoly::hbar()))
                     : scalar_json(supertrace(CliffordC(x.numeric), Cplx(x.hbar)));
    } else if (op == "star_kernel_integral") {
      auto f = get_mv("f"), g = get_mv("g");
      if (f.formal) throw std::invalid_argument("args.f: kernel integral is numeric-only");
      MatrixXcd k = parse_complex_matrix(need("k"), "args.k");
      out = dump_multivector(star_kernel_integral(f.numeric, g.numeric, to_sqmat(k), f.hbar),
                             f.hbar);
    } else if (op == "prequantum_op" || op == "star_on_state" || op == "is_polarized") {
      auto f = op == "is_polarized" ? ParsedMultivector{} : get_mv("f");
      auto psi = get_mv("psi");
      if (psi.formal) throw std::invalid_argument("args.psi: sections are numeric-only");
      Metric metric(parse_real_matrix(need("q"), "args.q"));
      Section s(psi.numeric, metric, psi.hbar);
      if (op == "prequantum_op") {
        out = dump_multivector(prequantum_op(f.numeric, s).v, psi.hbar);
      } else {
        Polarization pol(parse_complex_matrix(need("p"), "args.p"), metric);
        if (op == "star_on_state")
          out = dump_multivector(star_on_state(f.numeric, s, pol).v, psi.hbar);
        else
          out = json{{"is_polarized", is_polarized(s, pol)},
                     {"residual", polarization_residual(s, pol)}};
      }
    } else if (op == "transport") {
      auto psi = get_mv("psi");
      if (psi.formal) throw std::invalid_argument("args.psi: sections are numeric-only");
      Metric metric(parse_real_matrix(need("q"), "args.q"));
      Section s(psi.numeric, metric, psi.hbar);
      const json& pj = need("path");
      ProjectionPath path;
      if (pj.value("kind", "") == std::string("geodesic")) {
        ComplexStructure j0(parse_real_matrix(pj.at("j0"), "args.path.j0"), metric);
        MatrixXd x = parse_real_matrix(pj.at("x"), "args.path.x");
        path = geodesic_projection_path(j0, x);
      } else if (pj.value("kind", "") == std::string("connect")) {
        Polarization p0(parse_complex_matrix(pj.at("p0"), "args.path.p0"), metric);
        Polarization p1(parse_complex_matrix(pj.at("p1"), "args.path.p1"), metric);
        path = connecting_projection_path(p0, p1);
      } else if (pj.value("kind", "") == std::string("points")) {
        // Ordered projections, joined by canonical connecting segments.
        const auto& pts = pj.at("p");
        if (!pts.is_array() || pts.size() < 2)
          throw std::invalid_argument("args.path.p: need at least two projections");
        std::vector<ProjectionPath> segs;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
          Polarization a(parse_complex_matrix(pts[i], "args.path.p[i]"), metric);
          Polarization b(parse_complex_matrix(pts[i + 1], "args.path.p[i+1]"), metric);
          segs.push_back(connecting_projection_path(a, b));
        }
        path = [segs](double t) {
          const double scaled = std::min(std::max(t, 0.0), 1.0 - 1e-12) * segs.size();
          const auto idx = static_cast<std::size_t>(scaled);
          return segs[idx](scaled - idx);
        };
      } else {
        throw std::invalid_argument(
            "args.path.kind: expected \"geodesic\", \"connect\" or \"points\"");
      }
      const int steps = j.value("steps", 200);
      const bool meta = j.value("metaplectic", false);
      auto res = transport_state(path, metric, s, steps, meta);
      out = json{{"state", dump_multivector(res.state.v, psi.hbar)},
                 {"metaplectic_phase",
                  json::array({res.metaplectic_phase.real(), res.metaplectic_phase.imag()})},
                 {"steps", res.steps},
                 {"polarization_residual", res.polarization_residual},
                 {"end_p", dump_complex_matrix(res.end.p())}};
    } else {
      std::cerr << "unknown op \"" << op << "\"\n";
      return 2;
    }

    std::cout << out.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "eval error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermionic deformation quantisation toolkit"};
  app.require_subcommand(1);

  auto* verify_cmd = app.add_subcommand("verify", "run identity suites and report");
  fermion::verify::SuiteConfig cfg;
  std::vector<std::string> suites_pos, suites_flag;
  std::string json_path;
  verify_cmd->add_option("suites", suites_pos,
                         "suites to run (all, algebra, star, clifford, polarization, states, "
                         "transport, metaplectic, equivariance)");
  verify_cmd->add_option("--suite", suites_flag, "additional suite selector");
  verify_cmd->add_option("--m", cfg.m, "generator count")->check(CLI::Range(2, 16));
  verify_cmd->add_option("--hbar", cfg.hbar, "numeric Planck parameter")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", cfg.seed, "PRNG seed (SplitMix64)");
  verify_cmd->add_option("--tol", cfg.tol, "base tolerance")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--json", json_path, "write the JSON report here");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate one operation from a JSON file");
  std::string eval_file;
  eval_cmd->add_option("file", eval_file, "JSON expression file")->required();

  CLI11_PARSE(app, argc, argv);

  if (eval_cmd->parsed()) return run_eval(eval_file);

  for (const auto& s : suites_pos) suites_flag.push_back(s);
  for (const auto& s : suites_flag) {
    if (s == "all") continue;
    const auto& names = fermion::verify::suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      std::cerr << "unknown suite \"" << s << "\"\n";
      return 2;
    }
  }
  cfg.suites.clear();
  for (const auto& s : suites_flag)
    if (s != "all") cfg.suites.push_back(s);

  std::vector<fermion::verify::CheckResult> results;
  try {
    results = fermion::verify::run_suites(cfg);
  } catch (const std::exception& e) {
    std::cerr << "verify error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& r : results) {
    std::printf("%-14s %-34s %-4s  residual %.3e  (limit %.1e, %.0f ms)\n", r.suite.c_str(),
                r.name.c_str(), r.pass ? "ok" : "FAIL", r.residual, r.threshold, r.ms);
  }
  const bool pass = fermion::verify::all_passed(results);
  std::printf("%zu checks, %s\n", results.size(), pass ? "all passed" : "FAILURES PRESENT");

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "cannot write " << json_path << "\n";
      return 2;
    }
    out << fermion::verify::report_json(cfg, results).dump(2) << "\n";
  }
  return pass ? 0 : 1;
}
