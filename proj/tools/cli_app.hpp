#pragma once

// entconv command-line frontend. Kept in a header so tests can drive it
// in-process; entconv_cli.cpp only forwards main().
//
// Exit codes: 0 success or PASS, 1 FAIL, 2 input or precondition error.

#include <entconv/entconv.hpp>
#include <entconv/json_io.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace entconv::cli {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json read_json_file(const std::string &path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in)
      throw InputError("cannot open " + path);
    buf << in.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error &e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

/// A matrix file may hold a bare matrix or an object with the matrix under `key`.
inline HermitianMatrix read_matrix(const std::string &path, const char *key) {
  const Json j = read_json_file(path);
  if (j.is_object() && j.contains(key) && !j.contains("re"))
    return matrix_from_json(j.at(key), key);
  return matrix_from_json(j, key);
}

inline Dims parse_dims(const std::string &s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos)
      throw InputError("");
    size_t used = 0;
    const long a = std::stol(s.substr(0, x), &used);
    if (used != x)
      throw InputError("");
    const long b = std::stol(s.substr(x + 1), &used);
    if (used != s.size() - x - 1 || a < 1 || b < 1)
      throw InputError("");
    return {a, b};
  } catch (const std::exception &) {
    throw InputError("dims must look like 2x3, got '" + s + "'");
  }
}

struct Options {
  bool bits = false;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int samples = -1;

  [[nodiscard]] double unit(double nats) const {
    return bits ? nats / std::numbers::ln2 : nats;
  }
};

class App {
public:
  App(std::ostream &out) : out_(out) {}

  int run(int argc, const char *const *argv) {
    CLI::App app{"Converse optimization for entanglement measures over PPT and Rains sets"};
    app.set_version_flag("--version", ENTCONV_VERSION);
    app.require_subcommand(1);
    app.add_flag("--bits", opt_.bits, "Report entropic quantities in bits");
    app.add_option("--tol", tol_, "Override verification tolerances");
    app.fallthrough();
    setup(app);
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
      return app.exit(e, out_, out_);
    } catch (const CLI::CallForVersion &e) {
      return app.exit(e, out_, out_);
    } catch (const CLI::ParseError &e) {
      return fail_input("InvalidArgument", e.what());
    }
    if (tol_ > 0)
      opt_.tol = tol_;
    try {
      return action_();
    } catch (const InputError &e) {
      return fail_input("InvalidArgument", e.what());
    } catch (const Error &e) {
      return fail_input(kind_name(e.kind()), e.what());
    } catch (const nlohmann::json::exception &e) {
      return fail_input("InvalidArgument", e.what());
    }
  }

private:
  std::ostream &out_;
  Options opt_;
  double tol_ = -1.0;
  std::function<int()> action_;

  // option storage
  std::string dims_ = "2x2", sigma_path_, phi_path_, coeffs_path_, rho_path_, tau_path_, q_path_,
              m_path_, kind_ = "relent";
  double x_ = -1.0, alpha_ = 0.5;
  int count_ = 20;

  static std::string kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::InfiniteDivergence: return "InfiniteDivergence";
    case ErrorKind::NonInvertibleKernel: return "NonInvertibleKernel";
    case ErrorKind::NotAState: return "NotAState";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotPpt: return "NotPpt";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Unattainable: return "Unattainable";
    }
    return "Unknown";
  }

  int fail_input(const std::string &kind, const std::string &msg) {
    emit({{"error", {{"kind", kind}, {"message", msg}}}});
    return 2;
  }

  void emit(Json j) {
    j["version"] = ENTCONV_VERSION;
    j["units"] = opt_.bits ? "bits" : "nats";
    out_ << j.dump(2) << "\n";
  }

  double tol_or(double def) const { return opt_.tol.value_or(def); }

  SolverConfig solver() const {
    SolverConfig c;
    c.seed = opt_.seed;
    if (opt_.tol)
      c.residual_tol = *opt_.tol;
    return c;
  }

  template <class F>
  void bind(CLI::App *sub, F f) {
    sub->callback([this, f] { action_ = f; });
  }

  void add_seed(CLI::App *sub) { sub->add_option("--seed", opt_.seed, "RNG seed"); }
  void add_samples(CLI::App *sub) {
    sub->add_option("--samples", opt_.samples, "Size of the sampling battery");
  }

  void setup(CLI::App &app) {
    auto *bs = app.add_subcommand("boundary-sample", "Random boundary point of P");
    bs->add_option("--dims", dims_, "Subsystem dims, e.g. 2x3")->required();
    add_seed(bs);
    bind(bs, [this] { return boundary_sample(); });

    auto *pf = app.add_subcommand("ppt-functional", "Supporting functional of P at a boundary point");
    pf->add_option("--sigma-star", sigma_path_)->required();
    pf->add_option("--coeffs", coeffs_path_, "JSON array of nonnegative coefficients");
    bind(pf, [this] { return ppt_functional_cmd(); });

    auto *ree = app.add_subcommand("ree", "Converse problem for the REE over P");
    ree->require_subcommand(1);
    auto *fam = ree->add_subcommand("family", "Family of states with the given closest PPT state");
    fam->add_option("--sigma-star", sigma_path_)->required();
    fam->add_option("--phi", phi_path_, "Functional JSON (or bare phi matrix)")->required();
    fam->add_option("--x", x_, "Evaluate at this x (default: 0.25, 0.5, 0.75 of x_max)");
    bind(fam, [this] { return ree_family(); });
    auto *rv = ree->add_subcommand("verify", "Check that sigma-star is a closest PPT state to rho");
    rv->add_option("--rho", rho_path_)->required();
    rv->add_option("--sigma-star", sigma_path_)->required();
    add_seed(rv);
    add_samples(rv);
    bind(rv, [this] { return ree_verify(); });

    auto *rains = app.add_subcommand("rains", "Rains set T");
    rains->require_subcommand(1);
    auto *rf = rains->add_subcommand("functional", "(P1 - P2 + Q)^Γ at tau-star");
    rf->add_option("--tau-star", tau_path_)->required();
    rf->add_option("--q", q_path_, "Nullspace block Q (default 0)");
    bind(rf, [this] { return rains_functional_cmd(); });
    auto *rc = rains->add_subcommand("converse", "rho = L‡(φ) or refusal");
    rc->add_option("--tau-star", tau_path_)->required();
    rc->add_option("--phi", phi_path_)->required();
    bind(rc, [this] { return rains_converse_cmd(); });
    auto *rvv = rains->add_subcommand("verify", "Check that tau-star minimizes S(rho||.) over T");
    rvv->add_option("--rho", rho_path_)->required();
    rvv->add_option("--tau-star", tau_path_)->required();
    add_seed(rvv);
    add_samples(rvv);
    bind(rvv, [this] { return rains_verify_cmd(); });
    auto *rcf = rains->add_subcommand("closed-form", "Closed-form Rains bound");
    rcf->add_option("--tau-star", tau_path_)->required();
    rcf->add_option("--phi", phi_path_)->required();
    rcf->add_option("--rho", rho_path_)->required();
    bind(rcf, [this] { return rains_closed_cmd(); });

    auto *cmp = app.add_subcommand("compare", "E_P, R and LN by forward solvers");
    cmp->add_option("--rho", rho_path_)->required();
    add_seed(cmp);
    bind(cmp, [this] { return compare(); });

    auto *audit = app.add_subcommand("audit", "Sampled audits");
    audit->require_subcommand(1);
    auto *qe = audit->add_subcommand("qubit-equality", "max |R - E_P| over random non-PPT states");
    qe->add_option("--dims", dims_)->required();
    qe->add_option("--samples", count_)->check(CLI::PositiveNumber);
    add_seed(qe);
    bind(qe, [this] { return audit_qubit(); });

    auto *hp = app.add_subcommand("hppt", "max over PPT states of Tr[M sigma]");
    hp->add_option("--m", m_path_)->required();
    bind(hp, [this] { return hppt(); });

    auto *dv = app.add_subcommand("divergence", "Evaluate a divergence");
    dv->add_option("--kind", kind_)->check(CLI::IsMember({"relent", "quasi", "renyi", "sandwiched"}));
    dv->add_option("--alpha", alpha_, "Order (renyi, sandwiched) or exponent of x^alpha (quasi)");
    dv->add_option("--rho", rho_path_)->required();
    dv->add_option("--sigma", sigma_path_)->required();
    bind(dv, [this] { return divergence(); });
  }

  SupportingFunctional read_functional(const std::string &path, const HermitianMatrix &anchor,
                                       SetTag set) const {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("phi"))
      return functional_from_json(j);
    return {matrix_from_json(j, "phi"), anchor, set, std::nullopt, std::nullopt};
  }

  int boundary_sample() {
    const Dims d = parse_dims(dims_);
    emit({{"sigma_star", matrix_to_json(random_boundary_state(d, opt_.seed))},
          {"dims", {d.n1, d.n2}},
          {"seed", opt_.seed}});
    return 0;
  }

  int ppt_functional_cmd() {
    const auto s = read_matrix(sigma_path_, "sigma_star");
    RealVector a;
    if (!coeffs_path_.empty())
      a = vector_from_json(read_json_file(coeffs_path_));
    emit(functional_to_json(ppt_functional(s, a)));
    return 0;
  }

  int ree_family() {
    const auto s = read_matrix(sigma_path_, "sigma_star");
    const auto f = read_functional(phi_path_, s, SetTag::Ppt);
    const auto fam = build_family(s, f);
    Json j = family_to_json(fam);
    std::vector<double> xs;
    if (x_ >= 0)
      xs = {x_};
    else
      xs = {0.25 * fam.x_max, 0.5 * fam.x_max, 0.75 * fam.x_max};
    Json vals = Json::array();
    for (double x : xs) {
      const auto rho = fam.at(x);
      vals.push_back({{"x", x},
                      {"rho", matrix_to_json(rho)},
                      {"E_P", opt_.unit(ree_closed_form(fam, x))},
                      {"is_ppt", is_ppt(rho)}});
    }
    j["members"] = vals;
    emit(j);
    return 0;
  }

  int ree_verify() {
    const auto rho = read_matrix(rho_path_, "rho");
    const auto s = read_matrix(sigma_path_, "sigma_star");
    CpsOptions o;
    o.seed = opt_.seed;
    o.tol = tol_or(o.tol);
    o.solver = solver();
    if (opt_.samples >= 0)
      o.samples = opt_.samples;
    const auto c = verify_cps(rho, s, o);
    Json j = {{"status", to_string(c.status)},
              {"phi_hat", matrix_to_json(c.phi_hat)},
              {"anchor_value", c.anchor_value},
              {"max_excess", c.max_excess},
              {"checked", c.checked},
              {"seed", o.seed},
              {"dual", {{"lambda", c.dual.lambda},
                        {"residual", c.dual.residual},
                        {"upper_bound", c.dual.upper_bound},
                        {"certified", c.dual_certified}}},
              {"sigma_star_singular", c.sigma_star_singular}};
    if (c.violator)
      j["violator"] = matrix_to_json(*c.violator);
    emit(j);
    return c.status == CpsStatus::Fail ? 1 : 0;
  }

  int rains_functional_cmd() {
    const auto t = read_matrix(tau_path_, "tau_star");
    std::optional<HermitianMatrix> q;
    if (!q_path_.empty())
      q = read_matrix(q_path_, "Q");
    emit(functional_to_json(rains_functional(t, q)));
    return 0;
  }

  int rains_converse_cmd() {
    const auto t = read_matrix(tau_path_, "tau_star");
    const auto f = read_functional(phi_path_, t, SetTag::RainsT);
    const auto r = rains_converse(t, f);
    Json j = {{"accepted", r.accepted()},
              {"refusal", r.accepted() ? "" : to_string(r.refusal)},
              {"min_eigenvalue", r.min_eigenvalue},
              {"trace", r.trace}};
    if (r.rho)
      j["rho"] = matrix_to_json(*r.rho);
    emit(j);
    return r.accepted() ? 0 : 1;
  }

  int rains_verify_cmd() {
    const auto rho = read_matrix(rho_path_, "rho");
    const auto t = read_matrix(tau_path_, "tau_star");
    RainsMinOptions o;
    o.seed = opt_.seed;
    if (opt_.samples >= 0)
      o.samples = opt_.samples;
    if (opt_.tol)
      o.battery_tol = o.norm_tol = *opt_.tol;
    const auto r = verify_rains_min(rho, t, o);
    emit({{"status", r.pass ? "PASS" : "FAIL"},
          {"reason", r.reason},
          {"trivial_ppt", r.trivial_ppt},
          {"norm_gap", r.norm_gap},
          {"form_error", r.form_error},
          {"q_norm", r.q_norm},
          {"max_excess", r.checked ? Json(r.max_excess) : Json(nullptr)},
          {"checked", r.checked},
          {"seed", o.seed},
          {"phi_hat", matrix_to_json(r.phi_hat)}});
    return r.pass ? 0 : 1;
  }

  int rains_closed_cmd() {
    const auto t = read_matrix(tau_path_, "tau_star");
    const auto f = read_functional(phi_path_, t, SetTag::RainsT);
    const auto rho = read_matrix(rho_path_, "rho");
    const double r = rains_closed_form(t, f, rho);
    emit({{"R", opt_.unit(r)}, {"relative_entropy", opt_.unit(relative_entropy(rho, t).value())}});
    return 0;
  }

  int compare() {
    const auto rho = read_matrix(rho_path_, "rho");
    require_state(rho, "rho");
    const auto cfg = solver();
    const auto ep = minimize_ree(rho, SetTag::Ppt, cfg);
    const auto rt = minimize_ree(rho, SetTag::RainsT, cfg);
    const double ln = log_negativity(rho);
    emit({{"E_P", opt_.unit(ep.value)},
          {"R", opt_.unit(rt.value)},
          {"LN", opt_.unit(ln)},
          {"gaps", {{"E_P-R", opt_.unit(ep.value - rt.value)}, {"LN-R", opt_.unit(ln - rt.value)}}},
          {"E_P_status", to_string(ep.status)},
          {"R_status", to_string(rt.status)},
          {"E_P_residual", ep.residual},
          {"R_residual", rt.residual},
          {"sigma_hat", matrix_to_json(ep.sigma)},
          {"tau_hat", matrix_to_json(rt.sigma)},
          {"seed", cfg.seed}});
    return 0;
  }

  int audit_qubit() {
    const Dims d = parse_dims(dims_);
    const auto r = qubit_equality_audit(d, count_, opt_.seed, solver(), tol_or(5e-4));
    Json samples = Json::array();
    for (const auto &s : r.samples)
      samples.push_back({{"E_P", opt_.unit(s.ep)},
                         {"R", opt_.unit(s.rains)},
                         {"LN", opt_.unit(s.ln)},
                         {"full_rank", s.full_rank},
                         {"converged", s.converged}});
    Json j = {{"dims", {d.n1, d.n2}},
              {"seed", r.seed},
              {"max_gap", opt_.unit(r.max_gap)},
              {"covered", r.covered},
              {"samples", samples}};
    j["status"] = r.covered ? (r.pass ? "PASS" : "FAIL") : "REPORT-ONLY";
    emit(j);
    return r.covered && !r.pass ? 1 : 0;
  }

  int hppt() {
    const auto m = read_matrix(m_path_, "M");
    const double lo = min_eigenvalue(m), hi = max_eigenvalue(m);
    if (lo < -1e-9 || hi > 1.0 + 1e-9)
      throw InputError("M must satisfy 0 <= M <= 1");
    const auto r = maximize_linear(m, SetTag::Ppt, solver());
    Json j = {{"value", r.value},
              {"upper_bound", r.upper_bound},
              {"status", to_string(r.status)},
              {"sigma", matrix_to_json(r.sigma)},
              {"boundary", r.boundary}};
    if (r.functional)
      j["functional"] = functional_to_json(*r.functional);
    emit(j);
    return 0;
  }

  int divergence() {
    const auto rho = read_matrix(rho_path_, "rho");
    const auto sigma = read_matrix(sigma_path_, "sigma");
    Json j = {{"kind", kind_}};
    if (kind_ == "relent") {
      const auto v = relative_entropy(rho, sigma);
      j["value"] = v.is_finite() ? Json(opt_.unit(v.value())) : Json("inf");
    } else if (kind_ == "quasi") {
      j["alpha"] = alpha_;
      j["value"] = quasi_f_relative_entropy(ScalarFunction::power(alpha_), rho, sigma);
    } else if (kind_ == "renyi") {
      j["alpha"] = alpha_;
      j["value"] = opt_.unit(renyi_relative_entropy(alpha_, rho, sigma));
    } else {
      j["alpha"] = alpha_;
      j["value"] = opt_.unit(sandwiched_renyi(alpha_, rho, sigma));
    }
    emit(j);
    return 0;
  }
};

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout) {
  App app(out);
  return app.run(argc, argv);
}

} // namespace entconv::cli
