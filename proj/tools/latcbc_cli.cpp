// latcbc command-line front door.
//
// Subcommands: construct, eval-sd, bound, index-set, approx-demo,
// convergence, verify, bench.
//
// Exit codes: 0 success; 1 failure (including verification breaches);
// 2 nonprime n; 3 weight-spec parse failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latcbc/latcbc.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitNonPrime = 2;
constexpr int kExitWeightSpec = 3;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

void require_prime(std::int64_t n) {
  if (!latcbc::is_prime(n)) {
    throw CliError(kExitNonPrime, "n = " + std::to_string(n) + " is not prime");
  }
}

std::uint64_t resolve_seed(std::uint64_t config_seed) {
  // LATTICE_CBC_SEED overrides the configured seed.
  if (const char* env = std::getenv("LATTICE_CBC_SEED")) {
    try {
      return static_cast<std::uint64_t>(std::stoull(env));
    } catch (...) {
      throw CliError(kExitFailure, "LATTICE_CBC_SEED: not an unsigned integer");
    }
  }
  return config_seed;
}

// --weights accepts either a file path or inline JSON (detected by '{').
latcbc::WeightSpec load_weight_spec(const std::string& arg) {
  try {
    std::string text = arg;
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || arg[first] != '{') {
      text = latcbc::read_text_file(arg);
    }
    return latcbc::parse_weight_spec(text);
  } catch (const latcbc::WeightSpecError& e) {
    throw CliError(kExitWeightSpec, e.what());
  } catch (const std::exception& e) {
    throw CliError(kExitWeightSpec, std::string("weight spec: ") + e.what());
  }
}

struct WeightChoice {
  std::string weights_arg;  // --weights (path or inline JSON)
  std::string paper;        // --paper-weights {product|pod|spod}
};

latcbc::WeightFamily resolve_family(const WeightChoice& wc, int d, int& alpha) {
  if (!wc.paper.empty()) {
    latcbc::PaperWeightChoice choice;
    if (wc.paper == "product") {
      choice = latcbc::PaperWeightChoice::kProduct;
    } else if (wc.paper == "pod") {
      choice = latcbc::PaperWeightChoice::kPod;
    } else if (wc.paper == "spod") {
      choice = latcbc::PaperWeightChoice::kSpod;
    } else {
      throw CliError(kExitWeightSpec, "--paper-weights: expected product|pod|spod");
    }
    if (alpha <= 0) alpha = 2;
    return latcbc::paper_experiment_weights(choice, d, alpha);
  }
  if (wc.weights_arg.empty()) {
    throw CliError(kExitWeightSpec, "no weights given: use --weights or --paper-weights");
  }
  latcbc::WeightSpec spec = load_weight_spec(wc.weights_arg);
  if (alpha <= 0) alpha = spec.alpha > 0 ? spec.alpha : 2;
  if (spec.family.d < d) {
    throw CliError(kExitWeightSpec, "weight spec dimension " + std::to_string(spec.family.d) +
                                        " smaller than requested d = " + std::to_string(d));
  }
  return spec.family;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  latcbc::write_file_atomic(out_path, content);
}

std::string json_text(const latcbc::json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::int64_t> parse_int_list(const std::string& arg) {
  std::vector<std::int64_t> out;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  if (out.empty()) throw CliError(kExitFailure, "empty integer list: " + arg);
  return out;
}

// ---------------------------------------------------------------------------
// construct / eval-sd / bound / index-set / approx-demo
// ---------------------------------------------------------------------------

int cmd_construct(std::int64_t n, int d, int alpha, const WeightChoice& wc,
                  const std::string& out) {
  require_prime(n);
  const latcbc::WeightFamily w = resolve_family(wc, d, alpha);
  const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, alpha);
  emit(out, json_text(latcbc::generating_vector_to_json(gv, w)));
  return 0;
}

int cmd_eval_sd(std::int64_t n, int d, int alpha, const WeightChoice& wc,
                const std::string& z_arg, const std::string& vector_path,
                const std::string& out) {
  std::vector<std::int64_t> z;
  latcbc::json vec_doc;
  if (!vector_path.empty()) {
    vec_doc = latcbc::json::parse(latcbc::read_text_file(vector_path));
    const latcbc::ParsedVector pv = latcbc::parse_generating_vector(vec_doc);
    if (n == 0) n = pv.n;
    if (d == 0) d = pv.d;
    if (alpha <= 0 && pv.alpha > 0) alpha = pv.alpha;
    z = pv.z;
  }
  if (!z_arg.empty()) z = parse_int_list(z_arg);
  if (z.empty()) throw CliError(kExitFailure, "eval-sd: need --z or --vector");
  if (n == 0) throw CliError(kExitFailure, "eval-sd: need --n");
  if (d == 0) d = static_cast<int>(z.size());
  require_prime(n);
  latcbc::WeightFamily w = [&] {
    if (wc.weights_arg.empty() && wc.paper.empty() && vec_doc.contains("weights")) {
      latcbc::WeightSpec spec = latcbc::parse_weight_spec(vec_doc.at("weights"));
      if (alpha <= 0) alpha = spec.alpha > 0 ? spec.alpha : 2;
      return spec.family;
    }
    return resolve_family(wc, d, alpha);
  }();
  const latcbc::GeneratingVector gv = latcbc::eval_sd(n, d, w, alpha, z);
  emit(out, json_text(latcbc::generating_vector_to_json(gv, w)));
  return 0;
}

int cmd_bound(std::int64_t n, int d, int alpha, double lambda, const std::string& m_arg,
              const WeightChoice& wc, const std::string& out) {
  require_prime(n);
  latcbc::BoundInputs in;
  in.n = n;
  in.d = d;
  in.lambda = lambda;
  in.weights = resolve_family(wc, d, alpha);
  in.alpha = alpha;
  if (!m_arg.empty() && m_arg != "auto") in.M = std::stod(m_arg);
  const double t = latcbc::tau(in.alpha, in.lambda);
  const double c = latcbc::two_zeta(static_cast<double>(in.alpha) * in.lambda);
  const latcbc::WeightedSums s = latcbc::weighted_sums(in.weights, d, in.lambda, c);
  const double sd = latcbc::sd_bound(in);
  const latcbc::ErrorBound eb = latcbc::error_bound(in);
  latcbc::json doc;
  doc["n"] = n;
  doc["d"] = d;
  doc["alpha"] = alpha;
  doc["lambda"] = lambda;
  doc["tau"] = t;
  doc["two_zeta_alpha_lambda"] = c;
  doc["S0"] = s.S0;
  doc["S1"] = s.S1;
  doc["sd_bound"] = sd;
  doc["M"] = eb.M;
  doc["error_bound_general"] = eb.general;
  doc["error_bound_simplified"] = eb.simplified;
  doc["initial_error"] = latcbc::initial_error(in.weights, d);
  emit(out, json_text(doc));
  return 0;
}

int cmd_index_set(int d, int alpha, double M, const WeightChoice& wc, std::size_t cap,
                  const std::string& format, const std::string& out) {
  int a = alpha;
  const latcbc::WeightFamily w = resolve_family(wc, d, a);
  const latcbc::IndexSet set = latcbc::build_index_set(w, d, a, M, cap);
  if (format == "csv") {
    std::string csv;
    for (int j = 1; j <= d; ++j) csv += "h_" + std::to_string(j) + ",";
    csv += "r_value\n";
    for (std::size_t i = 0; i < set.frequencies.size(); ++i) {
      for (int j = 0; j < d; ++j) {
        csv += std::to_string(set.frequencies[i][static_cast<std::size_t>(j)]) + ",";
      }
      csv += latcbc::format_double(set.r_values[i]) + "\n";
    }
    emit(out, csv);
    return 0;
  }
  latcbc::json doc;
  doc["d"] = d;
  doc["alpha"] = a;
  doc["M"] = M;
  doc["count"] = set.frequencies.size();
  doc["frequencies"] = set.frequencies;
  doc["r_values"] = set.r_values;
  emit(out, json_text(doc));
  return 0;
}

int cmd_approx_demo(std::int64_t n, int d, int alpha, const WeightChoice& wc,
                    const std::string& m_arg, int samples, std::uint64_t seed,
                    const std::string& format, const std::string& out) {
  require_prime(n);
  const latcbc::WeightFamily w = resolve_family(wc, d, alpha);
  double M = std::sqrt(static_cast<double>(n));  // M = n^{1/(2 lambda)}, lambda = 1
  if (!m_arg.empty() && m_arg != "auto") M = std::stod(m_arg);
  const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, alpha);
  const latcbc::IndexSet set = latcbc::build_index_set(w, d, alpha, M);
  std::vector<double> f_samples(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    f_samples[static_cast<std::size_t>(k)] = latcbc::demo_function(latcbc::lattice_point(n, gv.z, k));
  }
  const latcbc::Approximant ap = latcbc::lattice_coefficients(f_samples, set, n, gv.z);
  const double err = latcbc::l2_error_estimate(latcbc::demo_function, ap, samples, seed);
  if (format == "csv") {
    std::string csv;
    for (int j = 1; j <= d; ++j) csv += "h_" + std::to_string(j) + ",";
    csv += "re,im\n";
    for (std::size_t i = 0; i < ap.freqs.size(); ++i) {
      for (int j = 0; j < d; ++j) {
        csv += std::to_string(ap.freqs[i][static_cast<std::size_t>(j)]) + ",";
      }
      csv += latcbc::format_double(ap.coeffs[i].real()) + "," +
             latcbc::format_double(ap.coeffs[i].imag()) + "\n";
    }
    emit(out, csv);
    return 0;
  }
  latcbc::json doc;
  doc["n"] = n;
  doc["d"] = d;
  doc["alpha"] = alpha;
  doc["M"] = M;
  doc["z"] = gv.z;
  doc["index_set_size"] = set.frequencies.size();
  doc["stored_coefficients"] = ap.freqs.size();
  doc["l2_error_estimate"] = err;
  doc["mc_samples"] = samples;
  doc["seed"] = seed;
  emit(out, json_text(doc));
  return 0;
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

int cmd_convergence(const std::string& n_list_arg, const std::string& d_list_arg, int alpha,
                    const std::string& families_arg, const std::string& out) {
  const std::vector<std::int64_t> n_list = parse_int_list(n_list_arg);
  for (std::int64_t n : n_list) require_prime(n);
  const std::vector<std::int64_t> d_list64 = parse_int_list(d_list_arg);
  std::vector<std::string> families;
  {
    std::stringstream ss(families_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) families.push_back(tok);
    }
  }
  std::string csv = "weight_label,d,n,Sd\n";
  std::string slopes = "weight_label,d,slope\n";
  for (const std::string& fam : families) {
    for (std::int64_t d64 : d_list64) {
      const int d = static_cast<int>(d64);
      int a = alpha;
      WeightChoice wc;
      wc.paper = fam;
      const latcbc::WeightFamily w = resolve_family(wc, d, a);
      std::vector<double> logn, logs;
      for (std::int64_t n : n_list) {
        const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, a);
        csv += fam + "," + std::to_string(d) + "," + std::to_string(n) + "," +
               latcbc::format_double(gv.Sd) + "\n";
        logn.push_back(std::log(static_cast<double>(n)));
        logs.push_back(std::log(gv.Sd));
        std::cerr << "convergence: " << fam << " d=" << d << " n=" << n << " Sd=" << gv.Sd
                  << "\n";
      }
      slopes += fam + "," + std::to_string(d) + "," +
                latcbc::format_double(latcbc::least_squares_slope(logn, logs)) + "\n";
    }
  }
  emit(out, csv + "\n" + slopes);
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyReport {
  int failures = 0;
  void check(const std::string& group, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << group << ": " << detail << "\n";
    if (!ok) ++failures;
  }
};

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

int cmd_verify(std::uint64_t seed, bool corrupt_gamma) {
  VerifyReport rep;
  std::mt19937_64 rng(seed);

  // 1. oracle-cbc-equivalence: fast construct vs 2^d general-weights brute force.
  {
    const latcbc::WeightKind kinds[] = {latcbc::WeightKind::kProduct, latcbc::WeightKind::kOrderDependent,
                                        latcbc::WeightKind::kFiniteOrder, latcbc::WeightKind::kPod,
                                        latcbc::WeightKind::kSpod};
    bool ok = true;
    std::string detail;
    int cases = 0;
    for (latcbc::WeightKind kind : kinds) {
      for (std::int64_t n : {7, 13}) {
        for (int d : {2, 3}) {
          const int sigma = (kind == latcbc::WeightKind::kSpod) ? 2 : 1;
          const latcbc::WeightFamily w = latcbc::random_family(kind, d, sigma, rng);
          const latcbc::GeneratingVector fast = latcbc::construct(n, d, w, 2);
          const latcbc::GeneralWeights gw = latcbc::GeneralWeights::from_family(w, d);
          const latcbc::GeneratingVector brute = latcbc::construct_brute_force(n, d, gw, 2);
          ++cases;
          if (fast.z != brute.z) {
            ok = false;
            detail = std::string(latcbc::weight_kind_name(kind)) + " n=" + std::to_string(n) +
                     " d=" + std::to_string(d) + ": z mismatch";
          }
          for (int s = 0; s < d && ok; ++s) {
            if (!rel_close(fast.T[static_cast<std::size_t>(s)], brute.T[static_cast<std::size_t>(s)], 1e-9)) {
              ok = false;
              detail = std::string(latcbc::weight_kind_name(kind)) + ": T mismatch at step " +
                       std::to_string(s + 1);
            }
          }
        }
      }
    }
    rep.check("oracle-cbc-equivalence", ok,
              ok ? std::to_string(cases) + " fast-vs-brute constructions agree" : detail);
  }

  // 2. structured-matvec: circulant and Hankel fast products vs naive.
  {
    bool ok = true;
    std::string detail = "circulant n in {5,13,31}, hankel m in {4,17}";
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::int64_t n : {5, 13, 31}) {
      const latcbc::OmegaTable om = latcbc::build_omega_table(n, 2);
      latcbc::CirculantPlan plan(n);
      std::vector<double> x(static_cast<std::size_t>(n));
      for (double& v : x) v = unif(rng);
      const std::vector<double> fast = latcbc::apply_kernel_matrix(plan, om.omega0, x);
      const std::vector<double> naive = latcbc::apply_kernel_matrix_naive(n, om.omega0, x);
      for (std::size_t i = 0; i < fast.size(); ++i) {
        if (!rel_close(fast[i], naive[i], 1e-9)) {
          ok = false;
          detail = "circulant mismatch at n=" + std::to_string(n);
        }
      }
    }
    for (int m : {4, 17}) {
      std::vector<double> c(static_cast<std::size_t>(m)), x(static_cast<std::size_t>(m));
      for (double& v : c) v = unif(rng);
      for (double& v : x) v = unif(rng);
      const std::vector<double> fast = latcbc::hankel_apply(c, x, m);
      for (int t = 0; t < m; ++t) {
        double acc = 0.0;
        for (int ell = 0; ell + t < m; ++ell) acc += c[static_cast<std::size_t>(t + ell)] * x[static_cast<std::size_t>(ell)];
        if (!rel_close(fast[static_cast<std::size_t>(t)], acc, 1e-9)) {
          ok = false;
          detail = "hankel mismatch at m=" + std::to_string(m);
        }
      }
    }
    rep.check("structured-matvec", ok, detail);
  }

  // 3. weight-equivalences: constant product == order-dependent a^ell;
  //    POD rescale invariance through the full construction.
  {
    bool ok = true;
    std::string detail = "constant-product/order-dependent and POD rescale agree";
    const int d = 3;
    const std::int64_t n = 13;
    const double a = 0.6;
    const latcbc::WeightFamily prod = latcbc::WeightFamily::product(std::vector<double>(d, a));
    const auto equiv = latcbc::equivalent_family(prod);
    if (!equiv || equiv->kind != latcbc::WeightKind::kOrderDependent) {
      ok = false;
      detail = "constant product did not reduce to order-dependent";
    } else {
      const latcbc::GeneratingVector g1 = latcbc::construct(n, d, prod, 2);
      const latcbc::GeneratingVector g2 = latcbc::construct(n, d, *equiv, 2);
      if (g1.z != g2.z || !rel_close(g1.Sd, g2.Sd, 1e-12)) {
        ok = false;
        detail = "constant-product vs order-dependent construction mismatch";
      }
    }
    const latcbc::WeightFamily pod = latcbc::random_family(latcbc::WeightKind::kPod, d, 1, rng);
    for (double scale : {0.5, 2.0}) {
      const latcbc::WeightFamily re = latcbc::rescale_pod(pod, scale);
      const latcbc::GeneratingVector g1 = latcbc::construct(n, d, pod, 2);
      const latcbc::GeneratingVector g2 = latcbc::construct(n, d, re, 2);
      if (g1.z != g2.z || !rel_close(g1.Sd, g2.Sd, 1e-12)) {
        ok = false;
        detail = "POD rescale changed the construction (a=" + std::to_string(scale) + ")";
      }
    }
    rep.check("weight-equivalences", ok, detail);
  }

  // 4. sigma1-reduction: SPOD sigma=1 vs the equivalent POD, plus diagonality
  //    of every precomputed G matrix.  --corrupt-gamma injects a fault here.
  {
    bool ok = true;
    std::string detail = "SPOD sigma=1 matches POD; G matrices diagonal";
    const int d = 4;
    const std::int64_t n = 13;
    latcbc::WeightFamily spod = latcbc::random_family(latcbc::WeightKind::kSpod, d, 1, rng);
    auto pod = latcbc::equivalent_family(spod);
    if (!pod || pod->kind != latcbc::WeightKind::kPod) {
      ok = false;
      detail = "sigma=1 SPOD did not reduce to POD";
    } else {
      latcbc::WeightFamily pod_used = *pod;
      if (corrupt_gamma && d >= 2) {
        pod_used.Gamma_ell[2] *= 1.01;  // deliberate fault injection
      }
      const latcbc::GeneratingVector g1 = latcbc::construct(n, d, spod, 2);
      const latcbc::GeneratingVector g2 = latcbc::construct(n, d, pod_used, 2);
      if (g1.z != g2.z || !rel_close(g1.Sd, g2.Sd, 1e-12)) {
        ok = false;
        detail = "SPOD sigma=1 and POD constructions disagree";
      }
      const double zeta2 = 2.0 * latcbc::zeta_even(4);
      const auto G = latcbc::precompute_spod_g(spod, d, zeta2);
      for (const auto& mat : G) {
        double diag_scale = 0.0;
        for (int t = 0; t < mat.order; ++t) diag_scale = std::max(diag_scale, std::abs(mat.at(t, t)));
        for (int t = 0; t < mat.order; ++t) {
          for (int tp = t + 1; tp < mat.order; ++tp) {
            if (std::abs(mat.at(t, tp)) > 1e-12 * std::max(1.0, diag_scale)) {
              ok = false;
              detail = "G matrix has a nonzero off-diagonal entry at sigma=1";
            }
          }
        }
      }
    }
    rep.check("sigma1-reduction", ok, detail);
  }

  // 5. index-set-bruteforce: DFS enumeration vs box scan.
  {
    bool ok = true;
    std::string detail = "DFS matches box scan (product d=3, POD d=2)";
    const latcbc::WeightFamily w1 =
        latcbc::WeightFamily::product(std::vector<double>{1.0, 0.5, 0.25});
    const latcbc::WeightFamily w2 = latcbc::random_family(latcbc::WeightKind::kPod, 2, 1, rng);
    struct Case {
      const latcbc::WeightFamily* w;
      int d;
      double M;
    } cases[] = {{&w1, 3, 40.0}, {&w2, 2, 25.0}};
    for (const auto& cs : cases) {
      double gmax = 1.0;
      {
        std::vector<int> u;
        for (std::uint32_t mask = 0; mask < (1u << cs.d); ++mask) {
          u.clear();
          for (int j = 0; j < cs.d; ++j) {
            if (mask & (1u << j)) u.push_back(j + 1);
          }
          gmax = std::max(gmax, latcbc::gamma_subset(*cs.w, u));
        }
      }
      const int H = static_cast<int>(std::ceil(std::pow(cs.M * gmax, 0.5)));
      latcbc::IndexSet fast = latcbc::build_index_set(*cs.w, cs.d, 2, cs.M);
      latcbc::IndexSet brute = latcbc::build_index_set_boxscan(*cs.w, cs.d, 2, cs.M, H);
      std::sort(fast.frequencies.begin(), fast.frequencies.end());
      std::sort(brute.frequencies.begin(), brute.frequencies.end());
      if (fast.frequencies != brute.frequencies) {
        ok = false;
        detail = "index-set mismatch at d=" + std::to_string(cs.d);
      }
    }
    rep.check("index-set-bruteforce", ok, detail);
  }

  // 6. bound-soundness: constructed S_d never exceeds the bound.
  {
    bool ok = true;
    std::string detail = "S_d <= sd_bound on sampled configs";
    for (std::int64_t n : {101, 257}) {
      for (int d : {2, 4}) {
        const latcbc::WeightFamily w = latcbc::random_family(latcbc::WeightKind::kProduct, d, 1, rng);
        const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, 2);
        latcbc::BoundInputs in;
        in.alpha = 2;
        in.lambda = 1.0;
        in.n = n;
        in.d = d;
        in.weights = w;
        const double bound = latcbc::sd_bound(in);
        if (!(gv.Sd <= bound * (1.0 + 1e-12))) {
          ok = false;
          detail = "S_d exceeds bound at n=" + std::to_string(n) + " d=" + std::to_string(d);
        }
      }
    }
    rep.check("bound-soundness", ok, detail);
  }

  // 7. kernel-identities: omega0 symmetry, row sum, endpoint value.
  {
    bool ok = true;
    std::string detail = "omega0 symmetry, row-sum and endpoint identities hold";
    for (std::int64_t n : {13, 101}) {
      for (int alpha : {2, 4}) {
        const latcbc::OmegaTable om = latcbc::build_omega_table(n, alpha);
        if (!rel_close(om.omega0[0], om.two_zeta_alpha, 1e-12)) {
          ok = false;
          detail = "omega0[0] != 2 zeta(alpha)";
        }
        for (std::int64_t m = 1; m < n; ++m) {
          if (om.omega0[static_cast<std::size_t>(m)] != om.omega0[static_cast<std::size_t>(n - m)]) {
            ok = false;
            detail = "omega0 mirror symmetry broken";
          }
        }
        double sum = 0.0;
        for (double v : om.omega0) sum += v;
        const double expect = om.two_zeta_alpha * std::pow(static_cast<double>(n), 1.0 - alpha);
        if (!rel_close(sum, expect, 1e-9)) {
          ok = false;
          detail = "omega0 row-sum identity violated";
        }
      }
    }
    rep.check("kernel-identities", ok, detail);
  }

  // 8. coefficients-single-dft: shared-DFT lattice coefficients vs direct sums.
  {
    bool ok = true;
    std::string detail = "single-DFT coefficients match direct summation";
    const std::int64_t n = 31;
    const int d = 2;
    const latcbc::WeightFamily w = latcbc::WeightFamily::product(std::vector<double>{1.0, 0.5});
    const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, 2);
    const latcbc::IndexSet set = latcbc::build_index_set(w, d, 2, 9.0);
    std::vector<double> samples(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      samples[static_cast<std::size_t>(k)] = latcbc::demo_function(latcbc::lattice_point(n, gv.z, k));
    }
    const latcbc::Approximant ap = latcbc::lattice_coefficients(samples, set, n, gv.z);
    for (std::size_t i = 0; i < ap.freqs.size(); ++i) {
      std::complex<double> direct(0.0, 0.0);
      for (std::int64_t k = 0; k < n; ++k) {
        std::int64_t dot = 0;
        for (int j = 0; j < d; ++j) {
          dot += static_cast<std::int64_t>(ap.freqs[i][static_cast<std::size_t>(j)]) * gv.z[static_cast<std::size_t>(j)];
        }
        const double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(dot) / static_cast<double>(n);
        direct += samples[static_cast<std::size_t>(k)] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      direct /= static_cast<double>(n);
      if (std::abs(direct - ap.coeffs[i]) > 1e-10 * std::max(1.0, std::abs(direct))) {
        ok = false;
        detail = "coefficient mismatch against direct summation";
      }
    }
    rep.check("coefficients-single-dft", ok, detail);
  }

  std::cout << (rep.failures == 0 ? "verify: all checks passed\n"
                                  : "verify: " + std::to_string(rep.failures) + " check(s) failed\n");
  return rep.failures == 0 ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

// Best of three runs: wall-clock minima are the stable statistic for short
// single-process measurements on shared machines.
double time_construct(std::int64_t n, int d, const latcbc::WeightFamily& w, int alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 3; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const latcbc::GeneratingVector gv = latcbc::construct(n, d, w, alpha);
    const auto stop = std::chrono::steady_clock::now();
    (void)gv;
    best = std::min(best, std::chrono::duration<double>(stop - start).count());
  }
  return best;
}

int cmd_bench(const std::string& out) {
  std::ostringstream table;
  table << "family,series,d,n,seconds,ratio\n";
  std::ostringstream warnings;
  std::ostringstream exponents;
  exponents << "family,series,exponent\n";

  struct Row {
    std::string family;
    std::string series;
    int d;
    std::int64_t n;
    double seconds;
    double ratio;  // vs previous row of the series; 0 for the first
  };
  std::vector<Row> rows;

  auto run_series = [&](const std::string& family, const std::string& series,
                        const std::vector<std::pair<int, std::int64_t>>& grid, double cap,
                        auto make_weights) {
    double prev = 0.0;
    std::vector<double> log_scale, log_secs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const int d = grid[i].first;
      const std::int64_t n = grid[i].second;
      const latcbc::WeightFamily w = make_weights(d);
      // One warm-up at the smallest size amortizes allocator effects.
      if (i == 0) time_construct(n, d, w, 2);
      const double secs = time_construct(n, d, w, 2);
      const double ratio = (i == 0) ? 0.0 : secs / prev;
      rows.push_back({family, series, d, n, secs, ratio});
      // The doubled quantity: n for the n-series, d for the d-series.
      log_scale.push_back(std::log(series == "n-doubling" ? static_cast<double>(n)
                                                          : static_cast<double>(d)));
      log_secs.push_back(std::log(std::max(secs, 1e-9)));
      std::cerr << "bench: " << family << " d=" << d << " n=" << n << " " << secs << "s"
                << (i ? (" ratio " + std::to_string(ratio)) : std::string()) << "\n";
      if (i > 0 && ratio > cap) {
        warnings << "WARN " << family << " " << series << " step d=" << d << ",n=" << n
                 << ": ratio " << ratio << " exceeds cap " << cap << "\n";
      }
      prev = secs;
    }
    const double expo = latcbc::least_squares_slope(log_scale, log_secs);
    exponents << family << "," << series << "," << latcbc::format_double(expo) << "\n";
    std::cerr << "bench: " << family << " " << series << " empirical exponent "
              << expo << "\n";
  };

  run_series("product", "n-doubling", {{8, 1009}, {8, 2003}, {8, 4001}}, 2.6, [](int d) {
    return latcbc::paper_experiment_weights(latcbc::PaperWeightChoice::kProduct, d, 2);
  });
  run_series("pod", "d-doubling", {{16, 1009}, {32, 1009}, {64, 1009}}, 4.8, [](int d) {
    return latcbc::paper_experiment_weights(latcbc::PaperWeightChoice::kPod, d, 2);
  });
  run_series("spod", "d-doubling", {{8, 257}, {16, 257}, {32, 257}}, 9.5, [](int d) {
    return latcbc::paper_experiment_weights(latcbc::PaperWeightChoice::kSpod, d, 4);
  });

  for (const Row& r : rows) {
    table << r.family << "," << r.series << "," << r.d << "," << r.n << ","
          << latcbc::format_double(r.seconds) << "," << latcbc::format_double(r.ratio) << "\n";
  }
  const std::string warn = warnings.str();
  if (!warn.empty()) std::cerr << warn;
  emit(out, table.str() + "\n" + exponents.str() + (warn.empty() ? "" : "\n# " + warn));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latcbc: CBC construction of rank-1 lattice generating vectors"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (overrides LATTICE_CBC_THREADS)");

  // Shared option storage; each subcommand wires the subset it uses.
  std::int64_t n = 0;
  int d = 0;
  int alpha = 0;
  double lambda = 1.0;
  double M_num = 0.0;
  std::string m_arg;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 12345;
  WeightChoice wc;
  std::string z_arg, vector_path;
  std::string n_list_arg = "503,1009,2003,4001,8009";
  std::string d_list_arg = "5";
  std::string families_arg = "product,pod,spod";
  std::size_t cap = 10'000'000;
  int samples = 2000;
  bool corrupt_gamma = false;

  auto add_weights = [&](CLI::App* cmd) {
    cmd->add_option("--weights", wc.weights_arg, "weight-spec JSON (path or inline)");
    cmd->add_option("--paper-weights", wc.paper, "built-in experiment family: product|pod|spod");
  };

  CLI::App* c_construct = app.add_subcommand("construct", "CBC-construct a generating vector");
  c_construct->add_option("--n", n, "number of lattice points (prime)")->required();
  c_construct->add_option("--d", d, "dimension")->required();
  c_construct->add_option("--alpha", alpha, "smoothness (even, in {2,4,6,8})");
  add_weights(c_construct);
  c_construct->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_eval = app.add_subcommand("eval-sd", "score an externally given vector");
  c_eval->add_option("--n", n, "number of lattice points (prime)");
  c_eval->add_option("--d", d, "dimension");
  c_eval->add_option("--alpha", alpha, "smoothness");
  add_weights(c_eval);
  c_eval->add_option("--z", z_arg, "comma-separated generating vector");
  c_eval->add_option("--vector", vector_path, "GeneratingVector JSON to rescore");
  c_eval->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_bound = app.add_subcommand("bound", "evaluate the theoretical bounds");
  c_bound->add_option("--n", n, "number of lattice points (prime)")->required();
  c_bound->add_option("--d", d, "dimension")->required();
  c_bound->add_option("--alpha", alpha, "smoothness");
  c_bound->add_option("--lambda", lambda, "exponent in (1/alpha, 1]");
  c_bound->add_option("--M", m_arg, "index-set threshold or \"auto\"");
  add_weights(c_bound);
  c_bound->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_index = app.add_subcommand("index-set", "enumerate A_d(M)");
  c_index->add_option("--d", d, "dimension")->required();
  c_index->add_option("--alpha", alpha, "smoothness");
  c_index->add_option("--M", M_num, "threshold r(h) <= M")->required();
  c_index->add_option("--cap", cap, "maximum set size");
  add_weights(c_index);
  c_index->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  c_index->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_demo = app.add_subcommand("approx-demo", "build an approximant of the demo function");
  c_demo->add_option("--n", n, "number of lattice points (prime)")->required();
  c_demo->add_option("--d", d, "dimension")->required();
  c_demo->add_option("--alpha", alpha, "smoothness");
  c_demo->add_option("--M", m_arg, "index-set threshold or \"auto\"");
  c_demo->add_option("--samples", samples, "Monte Carlo sample count");
  c_demo->add_option("--seed", seed, "RNG seed (LATTICE_CBC_SEED overrides)");
  add_weights(c_demo);
  c_demo->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  c_demo->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_conv = app.add_subcommand("convergence", "S_d against n study");
  c_conv->add_option("--n-list", n_list_arg, "comma-separated primes");
  c_conv->add_option("--d-list", d_list_arg, "comma-separated dimensions");
  c_conv->add_option("--alpha", alpha, "smoothness");
  c_conv->add_option("--families", families_arg, "comma list from {product,pod,spod}");
  c_conv->add_option("--out", out, "output path (default stdout)");

  CLI::App* c_verify = app.add_subcommand("verify", "run the cross-module invariant suite");
  c_verify->add_option("--seed", seed, "RNG seed (LATTICE_CBC_SEED overrides)");
  c_verify->add_flag("--corrupt-gamma", corrupt_gamma, "inject a weight-table fault (must fail)");

  CLI::App* c_bench = app.add_subcommand("bench", "time construct across scaling grids");
  c_bench->add_option("--out", out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) latcbc::set_thread_count(threads);
    if (alpha < 0 || alpha % 2 != 0) throw CliError(kExitFailure, "--alpha must be even");
    if (c_construct->parsed()) return cmd_construct(n, d, alpha, wc, out);
    if (c_eval->parsed()) return cmd_eval_sd(n, d, alpha, wc, z_arg, vector_path, out);
    if (c_bound->parsed()) return cmd_bound(n, d, alpha, lambda, m_arg, wc, out);
    if (c_index->parsed()) return cmd_index_set(d, alpha, M_num, wc, cap, format, out);
    if (c_demo->parsed())
      return cmd_approx_demo(n, d, alpha, wc, m_arg, samples, resolve_seed(seed), format, out);
    if (c_conv->parsed()) return cmd_convergence(n_list_arg, d_list_arg, alpha, families_arg, out);
    if (c_verify->parsed()) return cmd_verify(resolve_seed(seed), corrupt_gamma);
    if (c_bench->parsed()) return cmd_bench(out);
    std::cerr << "error: no subcommand\n";
    return kExitFailure;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const latcbc::WeightSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitWeightSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
