#include "fermion/json_io.hpp"

#include <set>

#include "fermion/errors.hpp"

namespace fermion {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

std::uint32_t parse_mask(const json& jm, int gens, const std::string& where) {
  if (!jm.is_array()) fail(where, "\"mask\" must be an array of generator indices");
  std::uint32_t mask = 0;
  int prev = 0;
  for (const auto& e : jm) {
    if (!e.is_number_integer()) fail(where, "mask entries must be integers");
    const int idx = e.get<int>();
    if (idx < 1 || idx > gens) fail(where, "mask index out of range 1..m");
    if (idx <= prev) fail(where, "mask indices must be strictly increasing");
    prev = idx;
    mask |= 1u << (idx - 1);
  }
  return mask;
}

json dump_mask(std::uint32_t mask) {
  json out = json::array();
  for (int i = 0; i < kMaxGenerators; ++i)
    if (mask & (1u << i)) out.push_back(i + 1);
  return out;
}

}  // namespace

ParsedMultivector parse_multivector(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains("m") || !j.at("m").is_number_integer()) fail(where, "missing integer \"m\"");
  const int gens = j.at("m").get<int>();
  if (gens < 1 || gens > kMaxGenerators) fail(where, "\"m\" out of range 1..16");

  ParsedMultivector out;
  const std::string mode = j.value("mode", "numeric");
  if (mode == "formal")
    out.formal = true;
  else if (mode != "numeric")
    fail(where, "\"mode\" must be \"numeric\" or \"formal\"");
  out.clifford = j.value("algebra", "exterior") == std::string("clifford");
  if (!out.formal) {
    if (!j.contains("hbar")) fail(where, "numeric mode requires \"hbar\"");
    out.hbar = j.at("hbar").get<double>();
    if (!(out.hbar > 0)) fail(where, "\"hbar\" must be positive");
  }

  out.numeric = MultivectorC(gens);
  out.exact = MultivectorF(gens);
  if (!j.contains("terms") || !j.at("terms").is_array()) fail(where, "missing \"terms\" array");
  std::set<std::uint32_t> seen;
  int pos = 0;
  for (const auto& term : j.at("terms")) {
    const std::string at = where + ".terms[" + std::to_string(pos++) + "]";
    if (!term.is_object()) fail(at, "expected an object");
    const std::uint32_t mask = parse_mask(term.value("mask", json::array()), gens, at);
    if (!seen.insert(mask).second) fail(at, "duplicate mask");
    if (out.formal) {
      if (!term.contains("laurent") || !term.at("laurent").is_object())
        fail(at, "formal terms need a \"laurent\" object");
      LaurentPoly p;
      for (const auto& [key, val] : term.at("laurent").items()) {
        int expo = 0;
        try {
          expo = std::stoi(key);
        } catch (...) {
          fail(at, "laurent keys must be integer exponents");
        }
        if (!val.is_array() || val.size() != 2)
          fail(at, "laurent values must be [re, im] pairs");
        p += LaurentPoly::term(
            expo, CRational::from_doubles(val[0].get<double>(), val[1].get<double>()));
      }
      out.exact[mask] = p;
    } else {
      out.numeric[mask] = Cplx(term.value("re", 0.0), term.value("im", 0.0));
    }
  }
  return out;
}

json dump_multivector(const MultivectorC& f, double hbar, bool clifford) {
  json terms = json::array();
  for (std::uint32_t mask = 0; mask < f.size(); ++mask) {
    if (f[mask] == Cplx(0)) continue;
    terms.push_back(
        {{"mask", dump_mask(mask)}, {"re", f[mask].real()}, {"im", f[mask].imag()}});
  }
  json out{{"m", f.gens()}, {"mode", "numeric"}, {"hbar", hbar}, {"terms", std::move(terms)}};
  if (clifford) out["algebra"] = "clifford";
  return out;
}

json dump_multivector(const MultivectorF& f, bool clifford) {
  json terms = json::array();
  for (std::uint32_t mask = 0; mask < f.size(); ++mask) {
    if (f[mask].is_zero()) continue;
    json lp = json::object();
    for (const auto& [expo, c] : f[mask].terms())
      lp[std::to_string(expo)] = json::array({c.re.value(), c.im.value()});
    terms.push_back({{"mask", dump_mask(mask)}, {"laurent", std::move(lp)}});
  }
  json out{{"m", f.gens()}, {"mode", "formal"}, {"terms", std::move(terms)}};
  if (clifford) out["algebra"] = "clifford";
  return out;
}

MatrixXd parse_real_matrix(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("m") || !j.contains("rows"))
    fail(where, "expected {\"m\": n, \"rows\": [[..], ..]}");
  const int n = j.at("m").get<int>();
  const auto& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(where, "need m rows");
  MatrixXd out(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[r].size()) != n) fail(where, "row length mismatch");
    for (int c = 0; c < n; ++c) out(r, c) = rows[r][c].get<double>();
  }
  return out;
}

MatrixXcd parse_complex_matrix(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("m") || !j.contains("rows"))
    fail(where, "expected {\"m\": n, \"rows\": [[[re,im], ..], ..]}");
  const int n = j.at("m").get<int>();
  const auto& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(where, "need m rows");
  MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[r].size()) != n) fail(where, "row length mismatch");
    for (int c = 0; c < n; ++c) {
      const auto& e = rows[r][c];
      if (!e.is_array() || e.size() != 2) fail(where, "entries must be [re, im]");
      out(r, c) = Cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return out;
}

json dump_real_matrix(const MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return json{{"m", m.rows()}, {"rows", std::move(rows)}};
}

json dump_complex_matrix(const MatrixXcd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return json{{"m", m.rows()}, {"rows", std::move(rows)}};
}

json canonical_multivector_json(const json& j, const std::string& where) {
  ParsedMultivector p = parse_multivector(j, where);
  if (p.formal) return dump_multivector(p.exact, p.clifford);
  return dump_multivector(p.numeric, p.hbar, p.clifford);
}

}  // namespace fermion
