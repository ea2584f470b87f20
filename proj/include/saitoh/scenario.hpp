#pragma once

// Scenario runner: binds theorem statements to config sections, executes
// them (optionally scenario-parallel), and emits deterministic JSON / CSV
// reports with 17-significant-digit floats.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

#include "saitoh/config.hpp"
#include "saitoh/minimal_l2.hpp"

namespace saitoh {

// ---------------------------------------------------------------------------
// Scenario description

struct Relation {
  enum class Type { Equality, Inequality, StrictGap, Bound };
  Type type = Type::Equality;
  double tol = 1e-8;
  double margin_abs = 0.0;
  double margin_rel = 0.0;
  double trunc_factor = 0.0;  // strict-gap margin from N-sweep differences
};

struct Scenario {
  std::string id;
  std::string theorem;
  std::vector<Domain> factors;
  std::vector<complexd> basepoint;
  std::vector<double> exponents;
  std::vector<FactorWeight> phi;
  CWeight cweight = CWeight::constant();
  Relation relation;
  int degree = 16;
  std::vector<int> degrees;  // sweep degrees (last one is the reported value)
  QuadratureSizes quad;

  std::optional<JetIdeal> ideal;
  std::optional<JetTarget> h0;
  std::vector<std::vector<complexd>> h0_factors;  // product-form target

  int jet_order = 1;             // higher-jet
  bool character_tune = false;   // saitoh-1d
  double character_detune = 0.0;
  int tgrid_points = 9;          // concavity
  double tgrid_emin = 0.1;
  bool expect_linear = false;
  int m2_max_degree = 4;         // m2-oracle
  std::vector<double> m2_tvalues{0.0, 0.5, 1.0, 2.0};

  ProductDomain product() const { return ProductDomain(factors, basepoint); }
  std::size_t dimension() const { return factors.size(); }
};

struct SweepRow {
  int degree = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct RunReport {
  enum class Status { Pass, Fail, HypothesisViolation };
  std::string id;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  Status status = Status::Fail;
  std::vector<std::string> notes;
  std::vector<SweepRow> sweep;
  double wall_ms = 0.0;  // console diagnostics only, never serialized

  bool passed() const { return status == Status::Pass; }
};

// ---------------------------------------------------------------------------
// Config -> Scenario

namespace detail {

inline complexd parse_complex(const ConfigValue& v) {
  if (v.is_number()) return complexd{v.as_number(), 0.0};
  const ConfigArray& a = v.as_array();
  if (a.size() != 2) throw std::runtime_error("complex values are [re, im]");
  return complexd{a[0].as_number(), a[1].as_number()};
}

inline Domain parse_domain(const ConfigValue& v) {
  const std::string& kind = v.at("kind").as_string();
  const complexd c = parse_complex(v.at("center"));
  if (kind == "disk") return Domain::disk(c, v.at("radius").as_number());
  if (kind == "annulus")
    return Domain::annulus(c, v.at("r_inner").as_number(), v.at("r_outer").as_number());
  throw std::runtime_error("unknown domain kind '" + kind + "'");
}

inline FactorWeight parse_weight(const ConfigValue& v) {
  const std::string& preset = v.at("preset").as_string();
  if (preset == "zero") return FactorWeight::zero();
  if (preset == "log_power") return FactorWeight::harmonic_log_power(v.at("s").as_number());
  if (preset == "gaussian_bump") return FactorWeight::gaussian_bump(v.at("a").as_number());
  if (preset == "log_abs_poly") {
    std::vector<complexd> g;
    for (const ConfigValue& c : v.at("g").as_array()) g.push_back(parse_complex(c));
    HarmonicSeries u;
    if (const ConfigValue* lc = v.find("u_log")) u.log_coeff = lc->as_number();
    if (const ConfigValue* up = v.find("u_poly"))
      for (const ConfigValue& c : up->as_array()) u.poly.push_back(parse_complex(c));
    return FactorWeight::log_abs_poly(std::move(g), std::move(u));
  }
  throw std::runtime_error("unknown weight preset '" + preset + "'");
}

inline CWeight parse_cweight(const ConfigValue& v) {
  const std::string& kind = v.at("kind").as_string();
  if (kind == "constant") return CWeight::constant();
  if (kind == "exponential") return CWeight::exponential(v.at("a").as_number());
  if (kind == "affine") return CWeight::affine(v.at("b").as_number());
  throw std::runtime_error("unknown c-weight kind '" + kind + "'");
}

inline Relation parse_relation(const ConfigValue& v) {
  Relation r;
  const std::string& type = v.at("type").as_string();
  if (type == "equality") r.type = Relation::Type::Equality;
  else if (type == "inequality") r.type = Relation::Type::Inequality;
  else if (type == "strict-gap") r.type = Relation::Type::StrictGap;
  else if (type == "bound") r.type = Relation::Type::Bound;
  else throw std::runtime_error("unknown relation type '" + type + "'");
  if (const ConfigValue* t = v.find("tol")) r.tol = t->as_number();
  if (const ConfigValue* m = v.find("margin_abs")) r.margin_abs = m->as_number();
  if (const ConfigValue* m = v.find("margin_rel")) r.margin_rel = m->as_number();
  if (const ConfigValue* f = v.find("trunc_factor")) r.trunc_factor = f->as_number();
  return r;
}

inline JetIdeal parse_ideal(const ConfigValue& v, const std::vector<double>& p,
                            std::size_t nvars) {
  const std::string& kind = v.at("kind").as_string();
  if (kind == "maximal") return JetIdeal::maximal(nvars);
  if (kind == "multiplier") return JetIdeal::multiplier(p);
  if (kind == "box") {
    MultiIndex beta;
    for (const ConfigValue& b : v.at("beta").as_array()) beta.push_back(b.as_int());
    if (beta.size() != nvars) throw std::runtime_error("box ideal arity mismatch");
    return JetIdeal::box(std::move(beta));
  }
  throw std::runtime_error("unknown ideal kind '" + kind + "'");
}

inline JetTarget parse_target(const ConfigValue& v) {
  JetTarget t;
  for (const ConfigValue& term : v.at("terms").as_array()) {
    MultiIndex alpha;
    for (const ConfigValue& a : term.at("alpha").as_array()) alpha.push_back(a.as_int());
    t.terms.push_back({std::move(alpha), parse_complex(term.at("d"))});
  }
  if (t.terms.empty()) throw std::runtime_error("target h0 needs at least one term");
  return t;
}

}  // namespace detail

inline Scenario scenario_from_section(const ConfigSection& sec) {
  constexpr const char* kPrefix = "scenario.";
  Scenario s;
  if (sec.name.rfind(kPrefix, 0) != 0)
    throw std::runtime_error("scenario sections are named [scenario.<id>]");
  s.id = sec.name.substr(std::string(kPrefix).size());
  if (s.id.empty()) throw std::runtime_error("scenario id must be nonempty");
  s.theorem = sec.at("theorem").as_string();
  for (const ConfigValue& d : sec.at("factors").as_array())
    s.factors.push_back(detail::parse_domain(d));
  for (const ConfigValue& z : sec.at("basepoint").as_array())
    s.basepoint.push_back(detail::parse_complex(z));
  for (const ConfigValue& p : sec.at("exponents").as_array())
    s.exponents.push_back(p.as_number());
  if (const ConfigValue* w = sec.find("weights")) {
    for (const ConfigValue& fw : w->as_array()) s.phi.push_back(detail::parse_weight(fw));
  } else {
    s.phi.assign(s.factors.size(), FactorWeight::zero());
  }
  if (const ConfigValue* c = sec.find("cweight")) s.cweight = detail::parse_cweight(*c);
  s.relation = detail::parse_relation(sec.at("relation"));
  if (const ConfigValue* n = sec.find("degree")) s.degree = n->as_int();
  if (const ConfigValue* ds = sec.find("degrees"))
    for (const ConfigValue& d : ds->as_array()) s.degrees.push_back(d.as_int());
  if (s.degrees.empty()) {
    if (s.degree == 16)
      s.degrees = {4, 8, 16, 24};  // default sweep
    else
      s.degrees = {std::max(4, s.degree / 4), std::max(4, s.degree / 2), s.degree};
    s.degrees.erase(std::unique(s.degrees.begin(), s.degrees.end()), s.degrees.end());
  }
  if (const ConfigValue* q = sec.find("boundary_nodes")) s.quad.boundary = q->as_int();
  if (const ConfigValue* q = sec.find("radial_nodes")) s.quad.radial = q->as_int();
  if (const ConfigValue* q = sec.find("angular_nodes")) s.quad.angular = q->as_int();
  if (const ConfigValue* i = sec.find("ideal"))
    s.ideal = detail::parse_ideal(*i, s.exponents, s.factors.size());
  if (const ConfigValue* h = sec.find("h0")) s.h0 = detail::parse_target(*h);
  if (const ConfigValue* hf = sec.find("h0_factors")) {
    for (const ConfigValue& hj : hf->as_array()) {
      std::vector<complexd> coeffs;
      for (const ConfigValue& c : hj.as_array()) coeffs.push_back(detail::parse_complex(c));
      s.h0_factors.push_back(std::move(coeffs));
    }
  }
  if (const ConfigValue* k = sec.find("jet_order")) s.jet_order = k->as_int();
  if (const ConfigValue* t = sec.find("character_tune")) s.character_tune = t->as_bool();
  if (const ConfigValue* t = sec.find("character_detune"))
    s.character_detune = t->as_number();
  if (const ConfigValue* t = sec.find("tgrid_points")) s.tgrid_points = t->as_int();
  if (const ConfigValue* t = sec.find("tgrid_emin")) s.tgrid_emin = t->as_number();
  if (const ConfigValue* t = sec.find("expect_linear")) s.expect_linear = t->as_bool();
  if (const ConfigValue* t = sec.find("m2_max_degree")) s.m2_max_degree = t->as_int();
  if (const ConfigValue* t = sec.find("m2_tvalues")) {
    s.m2_tvalues.clear();
    for (const ConfigValue& tv : t->as_array()) s.m2_tvalues.push_back(tv.as_number());
  }
  if (s.factors.size() != s.basepoint.size() || s.factors.size() != s.exponents.size() ||
      s.factors.size() != s.phi.size())
    throw std::runtime_error("scenario '" + s.id + "': factor arity mismatch");
  return s;
}

inline std::vector<Scenario> scenarios_from_config(const ConfigFile& file) {
  std::vector<Scenario> out;
  for (const ConfigSection& sec : file.sections)
    if (sec.name.rfind("scenario.", 0) == 0) out.push_back(scenario_from_section(sec));
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis validation

namespace detail {

inline double sum_inverse(const std::vector<double>& p) {
  double s = 0.0;
  for (double pj : p) s += 1.0 / pj;
  return s;
}

inline JetTarget target_of(const Scenario& s) {
  if (s.h0) return *s.h0;
  if (!s.h0_factors.empty()) return product_target(s.h0_factors);
  return JetTarget::one(s.dimension());
}

inline JetIdeal ideal_of(const Scenario& s) {
  if (s.ideal) return *s.ideal;
  return JetIdeal::maximal(s.dimension());
}

}  // namespace detail

inline std::vector<std::string> validate_hypotheses(const Scenario& s) {
  std::vector<std::string> v;
  const std::size_t n = s.dimension();
  const auto need_jet = [&] {
    if (!s.ideal) v.push_back("scenario requires an ideal");
    if (!s.h0 && s.h0_factors.empty()) v.push_back("scenario requires a target h0");
  };
  const auto need_box_product = [&] {
    if (!s.ideal || s.ideal->kind() != JetIdeal::Kind::Box)
      v.push_back("theorem requires a box ideal L_beta");
    if (s.h0_factors.size() != n)
      v.push_back("theorem requires a product target h0 = prod h_j");
    else if (s.ideal && s.ideal->kind() == JetIdeal::Kind::Box) {
      for (std::size_t j = 0; j < n; ++j)
        if (poly_order(s.h0_factors[j]) > s.ideal->box_beta()[j])
          v.push_back("beta~_j >= ord h_j violated at factor " + std::to_string(j));
    }
  };
  try {
    if (s.theorem == "main1-1") {
      if (n < 2) v.push_back("main1-1 requires n > 1");
      if (detail::sum_inverse(s.exponents) > 1.0 + 1e-12)
        v.push_back("main1-1 requires sum 1/p_j <= 1");
    } else if (s.theorem == "main1-2") {
      need_jet();
      if (s.ideal) {
        if (s.ideal->contains(MultiIndex(n, 0)))
          v.push_back("I must be a proper ideal");
        if (!detail::target_of(s).admissible_for(*s.ideal))
          v.push_back("(h0, z0) must not lie in I");
        for (const MultiIndex& a : s.ideal->constrained_multiindices()) {
          double crit = 0.0;
          for (std::size_t j = 0; j < n; ++j) crit += (a[j] + 1.0) / s.exponents[j];
          if (crit > 1.0 + 1e-12) {
            v.push_back("I(psi) is not contained in I");
            break;
          }
        }
      }
    } else if (s.theorem == "main2-1") {
      if (n < 2) v.push_back("main2-1 requires n > 1");
    } else if (s.theorem == "main2-2") {
      if (detail::sum_inverse(s.exponents) > 1.0 + 1e-12)
        v.push_back("main2-2 requires sum 1/p_j <= 1");
    } else if (s.theorem == "main2-3") {
      if (n < 2) v.push_back("main2-3 requires n > 1");
      need_box_product();
    } else if (s.theorem == "main2-4") {
      need_box_product();
      if (s.ideal && s.ideal->kind() == JetIdeal::Kind::Box) {
        double crit = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          crit += (s.ideal->box_beta()[j] + 1.0) / s.exponents[j];
        if (crit > 1.0 + 1e-12)
          v.push_back("main2-4 requires sum (beta~_j + 1)/p_j <= 1");
      }
    } else if (s.theorem == "saitoh-strict") {
      if (n != 1 || !s.factors[0].is_annulus())
        v.push_back("saitoh-strict runs on a single annulus factor");
      for (const FactorWeight& w : s.phi)
        if (w.preset() != FactorWeight::Preset::Zero)
          v.push_back("saitoh-strict is the unweighted statement (phi = 0)");
      if (!s.cweight.is_constant()) v.push_back("saitoh-strict uses c == 1");
    } else if (s.theorem == "saitoh-1d") {
      if (n != 1) v.push_back("saitoh-1d is one-dimensional");
      if (!s.character_tune) {
        const double lelong = s.phi[0].lelong(s.basepoint[0], s.factors[0]);
        if (2.0 * s.exponents[0] + lelong < 2.0 - 1e-12)
          v.push_back("saitoh-1d requires 2 p0 + lelong(phi) >= 2");
      } else if (s.exponents[0] < 1.0 - 1e-12) {
        v.push_back("character-tuned saitoh-1d uses harmonic phi, so p0 >= 1");
      }
    } else if (s.theorem == "higher-jet") {
      if (n != 1 || !s.factors[0].is_disk())
        v.push_back("higher-jet runs on a single disk factor");
      if (s.jet_order < 0) v.push_back("jet order k must be >= 0");
    } else if (s.theorem == "prod-S" || s.theorem == "prod-B") {
      if (n < 2) v.push_back("product formulas need n > 1");
      if (!s.cweight.is_constant())
        v.push_back("product formulas hold for separable weights (c == 1)");
      if (s.ideal) need_box_product();
    } else if (s.theorem == "app1") {
      if (n < 2) v.push_back("app1 runs on a product domain");
      if (!s.h0) v.push_back("app1 needs h0 = sum_{alpha in L} d_alpha w^alpha");
      if (s.h0) {
        for (const auto& [alpha, d] : s.h0->terms) {
          double crit = 0.0;
          for (std::size_t j = 0; j < n; ++j) crit += (alpha[j] + 1.0) / s.exponents[j];
          if (crit > 1.0 + 1e-12) v.push_back("L must be a subset of E1");
          if (std::abs(d) == 0.0) v.push_back("L coefficients must be nonzero");
        }
      }
    } else if (s.theorem == "m2-oracle") {
      if (s.m2_max_degree < 0) v.push_back("m2 oracle degree must be >= 0");
      for (double t : s.m2_tvalues)
        if (t < 0.0) v.push_back("m2 oracle t values must be >= 0");
    } else if (s.theorem == "concavity") {
      if (s.tgrid_points < 5) v.push_back("concavity needs >= 5 grid points");
      for (std::size_t j = 0; j < n; ++j)
        if (!s.factors[j].is_disk() ||
            std::abs(s.basepoint[j] - s.factors[j].center()) != 0.0)
          v.push_back("concavity scenarios use centered disk factors");
    } else {
      v.push_back("unknown theorem tag '" + s.theorem + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!s.factors[j].contains(s.basepoint[j]))
        v.push_back("basepoint outside factor " + std::to_string(j));
      if (!(s.exponents[j] > 0.0)) v.push_back("exponents must be positive");
    }
  } catch (const std::exception& e) {
    v.push_back(std::string("hypothesis validation failed: ") + e.what());
  }
  return v;
}

// ---------------------------------------------------------------------------
// Per-theorem evaluation (lhs, rhs) at one truncation degree

namespace detail {

struct PairValue {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline std::vector<BoundaryWeight> lambda_of(const Scenario& s, double scale = 1.0) {
  std::vector<BoundaryWeight> lambda;
  for (const FactorWeight& w : s.phi) lambda.push_back(BoundaryWeight{true, scale, w});
  return lambda;
}

inline ProductDomain factor_domain(const Scenario& s, std::size_t j) {
  return ProductDomain({s.factors[j]}, {s.basepoint[j]});
}

inline PairValue eval_at(const Scenario& s, int degree) {
  const std::size_t n = s.dimension();
  const ProductDomain dom = s.product();
  PairValue out;

  if (s.theorem == "main1-1") {
    out.lhs = hardy_dM_kernel_at(dom, s.exponents, s.phi, degree, s.quad).value;
    const ProductWeight w{s.phi, s.exponents, s.cweight};
    out.rhs = s.cweight.integral() * kPi * bergman_kernel_at(dom, w, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "main1-2") {
    const JetIdeal ideal = ideal_of(s);
    const JetTarget h0 = target_of(s);
    out.lhs = hardy_dM_min_at(dom, s.exponents, s.phi, ideal, h0, degree, s.quad).value;
    const ProductWeight w{s.phi, s.exponents, s.cweight};
    out.rhs = s.cweight.integral() * kPi *
              bergman_min_at(dom, w, ideal, h0, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "main2-1") {
    out.lhs = hardy_S_kernel_at(dom, lambda_of(s), degree, s.quad).value;
    out.rhs = sum_inverse(s.exponents) * std::pow(kPi, static_cast<double>(n - 1)) *
              hardy_dM_kernel_at(dom, s.exponents, s.phi, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "main2-2") {
    out.lhs = hardy_S_kernel_at(dom, lambda_of(s), degree, s.quad).value;
    const ProductWeight w{s.phi, s.exponents, s.cweight};
    out.rhs = sum_inverse(s.exponents) * s.cweight.integral() *
              std::pow(kPi, static_cast<double>(n)) *
              bergman_kernel_at(dom, w, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "main2-3" || s.theorem == "main2-4") {
    const JetIdeal ideal = ideal_of(s);
    const JetTarget h0 = target_of(s);
    const MultiIndex& beta = ideal.box_beta();
    double prod_beta = 1.0, sum_beta_p = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      prod_beta *= beta[j] + 1.0;
      sum_beta_p += (beta[j] + 1.0) / s.exponents[j];
    }
    out.lhs =
        prod_beta * hardy_S_min_at(dom, lambda_of(s), ideal, h0, degree, s.quad).value;
    if (s.theorem == "main2-3") {
      out.rhs = sum_beta_p * std::pow(kPi, static_cast<double>(n - 1)) *
                hardy_dM_min_at(dom, s.exponents, s.phi, ideal, h0, degree, s.quad).value;
    } else {
      const ProductWeight w{s.phi, s.exponents, s.cweight};
      out.rhs = sum_beta_p * s.cweight.integral() *
                std::pow(kPi, static_cast<double>(n)) *
                bergman_min_at(dom, w, ideal, h0, degree, s.quad).value;
    }
    return out;
  }
  if (s.theorem == "saitoh-strict") {
    out.lhs = hardy_S_kernel_at(dom, lambda_of(s), degree, s.quad).value;
    const ProductWeight w{s.phi, s.exponents, std::nullopt};
    out.rhs = kPi * bergman_kernel_at(dom, w, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "saitoh-1d") {
    std::vector<FactorWeight> phi = s.phi;
    if (s.character_tune) {
      const GreenSolution g = solve_green(s.factors[0], s.basepoint[0]);
      const double omega = std::abs(green_character_period(g).value) / kTwoPi;
      phi[0] = FactorWeight::harmonic_log_power(omega + s.character_detune);
    }
    out.lhs = hardy_dM_kernel_at(dom, s.exponents, phi, degree, s.quad).value;
    const ProductWeight w{phi, s.exponents, s.cweight};
    out.rhs = s.cweight.integral() * kPi * bergman_kernel_at(dom, w, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "higher-jet") {
    const int k = s.jet_order;
    const JetIdeal ideal = JetIdeal::box({k});
    const JetTarget h0 = JetTarget::monomial({k});
    out.lhs = hardy_S_min_at(dom, lambda_of(s, 1.0 / (k + 1.0)), ideal, h0, degree, s.quad)
                  .value;
    const std::vector<double> p{static_cast<double>(k + 1)};
    const ProductWeight w{s.phi, p, s.cweight};
    out.rhs =
        s.cweight.integral() * kPi * bergman_min_at(dom, w, ideal, h0, degree, s.quad).value;
    return out;
  }
  if (s.theorem == "prod-S" || s.theorem == "prod-B") {
    const bool jet = s.ideal.has_value();
    out.rhs = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const ProductDomain dj = factor_domain(s, j);
      const std::vector<double> pj{s.exponents[j]};
      if (s.theorem == "prod-S") {
        const std::vector<BoundaryWeight> lj{BoundaryWeight{true, 1.0, s.phi[j]}};
        if (jet) {
          const JetIdeal ij = JetIdeal::box({s.ideal->box_beta()[j]});
          JetTarget hj;
          for (std::size_t m = 0; m < s.h0_factors[j].size(); ++m)
            if (s.h0_factors[j][m] != complexd{0.0, 0.0})
              hj.terms.push_back({{static_cast<int>(m)}, s.h0_factors[j][m]});
          out.rhs *= hardy_S_min_at(dj, lj, ij, hj, degree, s.quad).value;
        } else {
          out.rhs *= hardy_S_kernel_at(dj, lj, degree, s.quad).value;
        }
      } else {
        const ProductWeight wj{{s.phi[j]}, pj, std::nullopt};
        if (jet) {
          const JetIdeal ij = JetIdeal::box({s.ideal->box_beta()[j]});
          JetTarget hj;
          for (std::size_t m = 0; m < s.h0_factors[j].size(); ++m)
            if (s.h0_factors[j][m] != complexd{0.0, 0.0})
              hj.terms.push_back({{static_cast<int>(m)}, s.h0_factors[j][m]});
          out.rhs *= bergman_min_at(dj, wj, ij, hj, degree, s.quad).value;
        } else {
          out.rhs *= bergman_kernel_at(dj, wj, degree, s.quad).value;
        }
      }
    }
    if (s.theorem == "prod-S") {
      out.lhs = jet ? hardy_S_min_at(dom, lambda_of(s), *s.ideal, target_of(s), degree,
                                     s.quad)
                          .value
                    : hardy_S_kernel_at(dom, lambda_of(s), degree, s.quad).value;
    } else {
      const ProductWeight w{s.phi, s.exponents, std::nullopt};
      out.lhs = jet ? bergman_min_at(dom, w, *s.ideal, target_of(s), degree, s.quad).value
                    : bergman_kernel_at(dom, w, degree, s.quad).value;
    }
    return out;
  }
  if (s.theorem == "app1") {
    const JetIdeal ipsi = JetIdeal::multiplier(s.exponents);
    const JetTarget h0 = target_of(s);
    const double k_h0 =
        hardy_S_min_at(dom, lambda_of(s), ipsi, h0, degree, s.quad).value;
    out.lhs = 1.0 / k_h0;
    out.rhs = 0.0;
    for (const auto& [alpha, d] : h0.terms) {
      const double k_alpha =
          hardy_S_min_at(dom, lambda_of(s), ipsi, JetTarget::monomial(alpha), degree,
                         s.quad)
              .value;
      out.rhs += std::norm(d) / k_alpha;
    }
    return out;
  }
  throw std::runtime_error("theorem '" + s.theorem + "' has no pointwise evaluation");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario execution

namespace detail {

inline void run_m2_oracle(const Scenario& s, RunReport& rep) {
  const ProductDomain dom = s.product();
  const std::size_t n = s.dimension();
  double max_rel = 0.0;
  // all multi-indices of total degree <= m2_max_degree
  std::vector<MultiIndex> alphas;
  MultiIndex alpha(n, 0);
  for (;;) {
    int total = 0;
    for (int a : alpha) total += a;
    if (total <= s.m2_max_degree) alphas.push_back(alpha);
    std::size_t j = n;
    bool done = true;
    while (j-- > 0) {
      if (++alpha[j] <= s.m2_max_degree) {
        done = false;
        break;
      }
      alpha[j] = 0;
    }
    if (done) break;
  }
  for (double t : s.m2_tvalues) {
    const ProductDomain region = sublevel_region(dom, s.exponents, t);
    for (const MultiIndex& a : alphas) {
      double quad_val = 1.0, formula = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const AreaQuadrature aq =
            area_quadrature(region.factors[j], s.quad.radial, s.quad.angular);
        double acc = 0.0;
        for (std::size_t x = 0; x < aq.size(); ++x)
          acc += std::pow(std::abs(aq.nodes[x] - dom.basepoint[j]), 2 * a[j]) *
                 aq.weights[x];
        quad_val *= acc;
        const double cap = 1.0 / dom.factors[j].radius();
        formula *= kPi * std::exp(-(a[j] + 1.0) * t / s.exponents[j]) /
                   ((a[j] + 1.0) * std::pow(cap, 2.0 * a[j] + 2.0));
      }
      max_rel = std::max(max_rel, std::abs(quad_val - formula) / formula);
    }
  }
  rep.lhs = max_rel;
  rep.rhs = s.relation.tol;
  rep.ratio = rep.lhs / rep.rhs;
  rep.status = max_rel <= s.relation.tol ? RunReport::Status::Pass : RunReport::Status::Fail;
}

inline void run_concavity(const Scenario& s, RunReport& rep) {
  const JetIdeal ideal = s.ideal ? *s.ideal : JetIdeal::multiplier(s.exponents);
  const MinL2Setup setup(s.product(), s.exponents, s.phi, ideal, detail::target_of(s));
  const std::vector<double> tgrid = default_t_grid(s.tgrid_points, s.tgrid_emin);
  std::vector<double> g(tgrid.size());
  for (std::size_t i = 0; i < tgrid.size(); ++i)
    g[i] = g_of_t(setup, s.cweight, tgrid[i], s.degree, s.quad);
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (g[i + 1] > g[i] * (1.0 + 1e-10))
      rep.notes.push_back("G(t) is not nonincreasing");
  const ConcavityReport cr = concavity_report(tgrid, g, s.cweight, s.relation.tol);
  rep.lhs = cr.max_violation / std::abs(g.front());
  rep.rhs = s.relation.tol;
  rep.ratio = rep.lhs / rep.rhs;
  bool ok = rep.lhs <= s.relation.tol && rep.notes.empty();
  if (s.expect_linear) {
    if (!cr.linear) {
      rep.notes.push_back("expected linearity in r = h(t) but found curvature");
      ok = false;
    }
    const double slope_expected = g.front() / s.cweight.integral();
    if (std::abs(cr.linear_slope / slope_expected - 1.0) > 1e-6) {
      rep.notes.push_back("linear slope differs from G(0) / int c e^{-t} dt");
      ok = false;
    }
  }
  rep.status = ok ? RunReport::Status::Pass : RunReport::Status::Fail;
  for (std::size_t i = 0; i < tgrid.size(); ++i)
    rep.sweep.push_back(SweepRow{static_cast<int>(i), cr.r[i], g[i]});
}

inline void apply_relation(const Scenario& s, RunReport& rep) {
  const Relation& r = s.relation;
  rep.ratio = rep.lhs / rep.rhs;
  switch (r.type) {
    case Relation::Type::Equality:
      rep.status = std::abs(rep.ratio - 1.0) <= r.tol ? RunReport::Status::Pass
                                                      : RunReport::Status::Fail;
      return;
    case Relation::Type::Inequality:
      rep.status = rep.lhs - rep.rhs >= -r.tol * std::abs(rep.rhs)
                       ? RunReport::Status::Pass
                       : RunReport::Status::Fail;
      return;
    case Relation::Type::StrictGap: {
      // Successive-difference truncation estimates are meaningful only once
      // the sweep has entered its asymptotic regime, so the certification is
      // demanded at the last two sweep points (and stability between them).
      bool ok = rep.sweep.size() >= 3;
      if (!ok) rep.notes.push_back("strict-gap needs at least three sweep degrees");
      for (std::size_t i = rep.sweep.size() >= 2 ? rep.sweep.size() - 2 : 0;
           ok && i < rep.sweep.size(); ++i) {
        const double est = std::abs(rep.sweep[i].lhs - rep.sweep[i - 1].lhs) +
                           std::abs(rep.sweep[i].rhs - rep.sweep[i - 1].rhs);
        const double margin =
            r.trunc_factor * est + r.margin_abs + r.margin_rel * std::abs(rep.sweep[i].rhs);
        if (!(rep.sweep[i].lhs - rep.sweep[i].rhs > margin)) {
          ok = false;
          rep.notes.push_back("gap at degree " + std::to_string(rep.sweep[i].degree) +
                              " is not above the margin");
        }
      }
      if (ok) {
        const SweepRow& a = rep.sweep[rep.sweep.size() - 2];
        const SweepRow& b = rep.sweep.back();
        const double gap_a = a.lhs - a.rhs, gap_b = b.lhs - b.rhs;
        if (std::abs(gap_a - gap_b) > 0.2 * std::abs(gap_b)) {
          ok = false;
          rep.notes.push_back("gap is not stable across the last two sweep degrees");
        }
      }
      rep.status = ok ? RunReport::Status::Pass : RunReport::Status::Fail;
      return;
    }
    case Relation::Type::Bound:
      rep.status =
          rep.lhs <= r.tol ? RunReport::Status::Pass : RunReport::Status::Fail;
      return;
  }
}

}  // namespace detail

inline RunReport run_scenario(const Scenario& s) {
  RunReport rep;
  rep.id = s.id;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> violations = validate_hypotheses(s);
  if (!violations.empty()) {
    rep.status = RunReport::Status::HypothesisViolation;
    rep.notes = violations;
    return rep;
  }
  try {
    if (s.theorem == "m2-oracle") {
      detail::run_m2_oracle(s, rep);
    } else if (s.theorem == "concavity") {
      detail::run_concavity(s, rep);
    } else {
      for (int degree : s.degrees) {
        const detail::PairValue v = detail::eval_at(s, degree);
        rep.sweep.push_back(SweepRow{degree, v.lhs, v.rhs});
      }
      rep.lhs = rep.sweep.back().lhs;
      rep.rhs = rep.sweep.back().rhs;
      detail::apply_relation(s, rep);
    }
  } catch (const std::exception& e) {
    rep.status = RunReport::Status::Fail;
    rep.notes.push_back(std::string("error: ") + e.what());
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

/// Run all scenarios, scenario-parallel when jobs > 1; reports are sorted
/// by scenario id so output is independent of scheduling.
inline std::vector<RunReport> run_scenarios(const std::vector<Scenario>& scenarios,
                                            int jobs = 1) {
  std::vector<RunReport> reports(scenarios.size());
  if (jobs <= 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      reports[i] = run_scenario(scenarios[i]);
  } else {
    std::atomic<std::size_t> next{0};
    const int workers =
        std::min<int>(jobs, static_cast<int>(scenarios.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= scenarios.size()) return;
          reports[i] = run_scenario(scenarios[i]);
        }
      });
    for (std::thread& t : pool) t.join();
  }
  std::sort(reports.begin(), reports.end(),
            [](const RunReport& a, const RunReport& b) { return a.id < b.id; });
  return reports;
}

// ---------------------------------------------------------------------------
// Deterministic report serialization (17 significant digits)

namespace detail {

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

inline std::string status_string(RunReport::Status s) {
  switch (s) {
    case RunReport::Status::Pass: return "pass";
    case RunReport::Status::Fail: return "fail";
    case RunReport::Status::HypothesisViolation: return "hypothesis-violation";
  }
  return "fail";
}

inline void write_report_json(const std::vector<RunReport>& reports, std::ostream& os) {
  os << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const RunReport& r = reports[i];
    os << "  {\"id\":\"" << detail::json_escape(r.id) << "\","
       << "\"lhs\":" << detail::fmt17(r.lhs) << ","
       << "\"rhs\":" << detail::fmt17(r.rhs) << ","
       << "\"ratio\":" << detail::fmt17(r.ratio) << ",";
    if (r.status == RunReport::Status::HypothesisViolation)
      os << "\"pass\":null,";
    else
      os << "\"pass\":" << (r.passed() ? "true" : "false") << ",";
    os << "\"status\":\"" << status_string(r.status) << "\",";
    os << "\"notes\":[";
    for (std::size_t k = 0; k < r.notes.size(); ++k) {
      if (k) os << ",";
      os << "\"" << detail::json_escape(r.notes[k]) << "\"";
    }
    os << "],\"sweep\":[";
    for (std::size_t k = 0; k < r.sweep.size(); ++k) {
      if (k) os << ",";
      os << "{\"n\":" << r.sweep[k].degree << ",\"lhs\":" << detail::fmt17(r.sweep[k].lhs)
         << ",\"rhs\":" << detail::fmt17(r.sweep[k].rhs) << "}";
    }
    os << "]}" << (i + 1 < reports.size() ? "," : "") << "\n";
  }
  os << "]\n";
}

inline void write_report_csv(const std::vector<RunReport>& reports, std::ostream& os) {
  os << "id,lhs,rhs,ratio,pass\n";
  for (const RunReport& r : reports) {
    os << r.id << ",";
    if (r.status == RunReport::Status::HypothesisViolation) {
      os << ",,,hypothesis-violation\n";
      continue;
    }
    os << detail::fmt17(r.lhs) << "," << detail::fmt17(r.rhs) << ","
       << detail::fmt17(r.ratio) << "," << (r.passed() ? "true" : "false") << "\n";
  }
}

inline void write_sweep_csv(const RunReport& report, std::ostream& os) {
  os << "degree,lhs,rhs,ratio\n";
  for (const SweepRow& row : report.sweep)
    os << row.degree << "," << detail::fmt17(row.lhs) << "," << detail::fmt17(row.rhs)
       << "," << detail::fmt17(row.lhs / row.rhs) << "\n";
}

/// Kernel values must be nondecreasing in the truncation degree (each larger
/// space contains the smaller); slack 1e-10 on the scale of the values.
inline bool sweep_monotone(const std::vector<SweepRow>& rows, std::string* msg = nullptr) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double slack_l = 1e-10 * std::max(1.0, std::abs(rows[i].lhs));
    const double slack_r = 1e-10 * std::max(1.0, std::abs(rows[i].rhs));
    if (rows[i].lhs < rows[i - 1].lhs - slack_l || rows[i].rhs < rows[i - 1].rhs - slack_r) {
      if (msg)
        *msg = "kernel value decreased between degrees " +
               std::to_string(rows[i - 1].degree) + " and " + std::to_string(rows[i].degree);
      return false;
    }
  }
  return true;
}

}  // namespace saitoh
