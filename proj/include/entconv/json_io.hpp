#pragma once

// JSON forms: matrices as {"dims": [n1,n2], "re": [[..]], "im": [[..]]}.
// Readers ignore unknown fields. Needs nlohmann/json.

#include <entconv/ppt_geometry.hpp>
#include <entconv/ree_converse.hpp>

#include <nlohmann/json.hpp>

#include <string>

namespace entconv {

using Json = nlohmann::json;

inline Json matrix_to_json(const HermitianMatrix &a) {
  const Index n = a.order();
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < n; ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Index j = 0; j < n; ++j) {
      rr.push_back(a(i, j).real());
      ri.push_back(a(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dims", {a.dims().n1, a.dims().n2}}, {"re", re}, {"im", im}};
}

inline HermitianMatrix matrix_from_json(const Json &j, const std::string &what = "matrix") {
  auto bad = [&](const std::string &msg) {
    return Error(ErrorKind::InvalidArgument, what + ": " + msg);
  };
  if (!j.is_object() || !j.contains("dims") || !j.contains("re"))
    throw bad("expected an object with dims and re");
  const Json &dj = j.at("dims");
  if (!dj.is_array() || dj.size() != 2 || !dj[0].is_number_integer() ||
      !dj[1].is_number_integer())
    throw bad("dims must be [n1, n2]");
  const Dims d{dj[0].get<Index>(), dj[1].get<Index>()};
  if (d.n1 < 1 || d.n2 < 1)
    throw bad("dims must be positive");
  const Index n = d.order();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  auto read = [&](const char *key, bool imag) {
    const Json &rows = j.at(key);
    if (!rows.is_array() || Index(rows.size()) != n)
      throw bad(std::string(key) + " must have " + std::to_string(n) + " rows");
    for (Index i = 0; i < n; ++i) {
      const Json &row = rows[size_t(i)];
      if (!row.is_array() || Index(row.size()) != n)
        throw bad(std::string(key) + " row " + std::to_string(i) + " has wrong length");
      for (Index k = 0; k < n; ++k) {
        if (!row[size_t(k)].is_number())
          throw bad(std::string(key) + " entries must be numbers");
        const double v = row[size_t(k)].get<double>();
        if (imag)
          m(i, k) += Complex(0.0, v);
        else
          m(i, k) += v;
      }
    }
  };
  read("re", false);
  if (j.contains("im"))
    read("im", true);
  return {d, std::move(m)};
}

inline Json vector_to_json(const RealVector &v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i)
    a.push_back(v(i));
  return a;
}

inline RealVector vector_from_json(const Json &j) {
  if (!j.is_array())
    throw Error(ErrorKind::InvalidArgument, "expected an array of numbers");
  RealVector v(Index(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw Error(ErrorKind::InvalidArgument, "expected an array of numbers");
    v(Index(i)) = j[i].get<double>();
  }
  return v;
}

/// Complex vector as {"re": [..], "im": [..]}.
inline Json cvector_to_json(const ComplexVector &v) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

inline Json functional_to_json(const SupportingFunctional &f) {
  Json cert = Json::object();
  if (f.ppt) {
    Json vecs = Json::array();
    for (Index c = 0; c < f.ppt->vectors.cols(); ++c)
      vecs.push_back(cvector_to_json(f.ppt->vectors.col(c)));
    cert = {{"coeffs", vector_to_json(f.ppt->coeffs)}, {"vectors", vecs}};
  } else if (f.rains) {
    cert = {{"P1", matrix_to_json(f.rains->p1)},
            {"P2", matrix_to_json(f.rains->p2)},
            {"Q", matrix_to_json(f.rains->q)}};
  }
  return {{"phi", matrix_to_json(f.phi)},
          {"anchor", matrix_to_json(f.anchor)},
          {"set", to_string(f.set)},
          {"certificate", cert}};
}

/// Reads a functional; certificates are not re-read (they are re-derivable).
inline SupportingFunctional functional_from_json(const Json &j) {
  if (!j.is_object() || !j.contains("phi") || !j.contains("anchor"))
    throw Error(ErrorKind::InvalidArgument, "functional needs phi and anchor");
  SupportingFunctional f;
  f.phi = matrix_from_json(j.at("phi"), "phi");
  f.anchor = matrix_from_json(j.at("anchor"), "anchor");
  const std::string set = j.value("set", "PPT");
  if (set == "PPT")
    f.set = SetTag::Ppt;
  else if (set == "RAINS_T")
    f.set = SetTag::RainsT;
  else
    throw Error(ErrorKind::InvalidArgument, "unknown set tag " + set);
  return f;
}

inline Json family_to_json(const StateFamily &fam) {
  return {{"sigma_star", matrix_to_json(fam.sigma_star)},
          {"phi", matrix_to_json(fam.functional.phi)},
          {"direction", matrix_to_json(fam.direction)},
          {"x_max", fam.x_max},
          {"singular_cap_applied", fam.singular_cap_applied},
          {"direction_indefinite", fam.direction_indefinite}};
}

} // namespace entconv
