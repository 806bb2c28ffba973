// Serialization: the weight-spec JSON document, the GeneratingVector JSON
// document, CSV emission with 17-significant-digit binary64 fidelity, and
// atomic file writes (temp + rename).
#pragma once

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "latcbc/cbc.hpp"
#include "latcbc/weights.hpp"

namespace latcbc {

using json = nlohmann::json;

struct WeightSpecError : std::runtime_error {
  explicit WeightSpecError(const std::string& what) : std::runtime_error(what) {}
};

struct WeightSpec {
  WeightFamily family;
  int alpha = 0;  // 0 when the document does not pin alpha
};

namespace detail {

inline double resolve_rescale_a(const json& doc, int d) {
  if (!doc.contains("rescale_a")) return 1.0;
  const json& a = doc.at("rescale_a");
  if (a.is_string()) {
    if (a.get<std::string>() != "auto") throw WeightSpecError("rescale_a: expected \"auto\" or a number");
    return std::exp(std::lgamma(static_cast<double>(d) + 1.0) / static_cast<double>(d));
  }
  if (!a.is_number()) throw WeightSpecError("rescale_a: expected \"auto\" or a number");
  const double v = a.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw WeightSpecError("rescale_a: must be positive and finite");
  return v;
}

// gamma field -> per-coordinate sequence of length d.
inline std::vector<double> parse_gamma(const json& doc, int d) {
  if (!doc.contains("gamma")) throw WeightSpecError("missing \"gamma\"");
  const json& g = doc.at("gamma");
  std::vector<double> out(static_cast<std::size_t>(d));
  if (g.contains("named")) {
    if (g.at("named").get<std::string>() != "power") throw WeightSpecError("gamma.named: only \"power\" is known");
    const double c = g.value("c", 1.0);
    const double eta = g.value("eta", 0.0);
    for (int j = 1; j <= d; ++j) {
      out[static_cast<std::size_t>(j - 1)] = c * std::pow(static_cast<double>(j), -eta);
    }
    return out;
  }
  if (g.contains("explicit")) {
    const auto v = g.at("explicit").get<std::vector<double>>();
    if (static_cast<int>(v.size()) < d) throw WeightSpecError("gamma.explicit: need at least d entries");
    out.assign(v.begin(), v.begin() + d);
    return out;
  }
  throw WeightSpecError("gamma: expected {\"named\": ...} or {\"explicit\": [...]}");
}

// Gamma field -> order weights Gamma_0..Gamma_len-1, divided by a^ell.
inline std::vector<double> parse_big_gamma(const json& doc, int len, double a) {
  if (!doc.contains("Gamma")) throw WeightSpecError("missing \"Gamma\"");
  const json& g = doc.at("Gamma");
  const double log_a = std::log(a);
  std::vector<double> out(static_cast<std::size_t>(len));
  if (g.contains("named")) {
    if (g.at("named").get<std::string>() != "factorial_over_a") {
      throw WeightSpecError("Gamma.named: only \"factorial_over_a\" is known");
    }
    // Gamma_ell = ell! / a^ell, accumulated in log space for large ell.
    for (int ell = 0; ell < len; ++ell) {
      out[static_cast<std::size_t>(ell)] =
          std::exp(std::lgamma(static_cast<double>(ell) + 1.0) - static_cast<double>(ell) * log_a);
    }
    out[0] = 1.0;
    return out;
  }
  if (g.contains("explicit")) {
    const auto v = g.at("explicit").get<std::vector<double>>();
    if (static_cast<int>(v.size()) < len) throw WeightSpecError("Gamma.explicit: too few entries");
    for (int ell = 0; ell < len; ++ell) {
      out[static_cast<std::size_t>(ell)] =
          v[static_cast<std::size_t>(ell)] * std::exp(-static_cast<double>(ell) * log_a);
    }
    return out;
  }
  throw WeightSpecError("Gamma: expected {\"named\": ...} or {\"explicit\": [...]}");
}

}  // namespace detail

inline WeightSpec parse_weight_spec(const json& doc) {
  try {
    if (!doc.is_object()) throw WeightSpecError("weight spec: expected a JSON object");
    const std::string kind = doc.value("kind", std::string());
    if (!doc.contains("d")) throw WeightSpecError("missing \"d\"");
    const int d = doc.at("d").get<int>();
    if (d < 1) throw WeightSpecError("d must be >= 1");
    WeightSpec spec;
    spec.alpha = doc.value("alpha", 0);
    const double a = detail::resolve_rescale_a(doc, d);

    if (kind == "product") {
      spec.family = WeightFamily::product(detail::parse_gamma(doc, d));
    } else if (kind == "order_dependent") {
      spec.family = WeightFamily::order_dependent(d, detail::parse_big_gamma(doc, d + 1, a));
    } else if (kind == "finite_order") {
      if (!doc.contains("q")) throw WeightSpecError("finite_order: missing \"q\"");
      const int q = doc.at("q").get<int>();
      if (q < 1) throw WeightSpecError("finite_order: q must be >= 1");
      spec.family = WeightFamily::finite_order(d, detail::parse_big_gamma(doc, std::min(q, d) + 1, a), q);
    } else if (kind == "pod") {
      std::vector<double> gj = detail::parse_gamma(doc, d);
      if (a != 1.0) {
        for (double& g : gj) g *= a;  // rescale-invariant pairing with Gamma_ell / a^ell
      }
      spec.family = WeightFamily::pod(detail::parse_big_gamma(doc, d + 1, a), gj);
    } else if (kind == "spod") {
      if (!doc.contains("sigma")) throw WeightSpecError("spod: missing \"sigma\"");
      const int sigma = doc.at("sigma").get<int>();
      if (sigma < 1) throw WeightSpecError("spod: sigma must be >= 1");
      if (!doc.contains("gamma_nu")) throw WeightSpecError("spod: missing \"gamma_nu\"");
      const auto gm = doc.at("gamma_nu").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(gm.size()) != d) throw WeightSpecError("spod: gamma_nu needs d rows");
      for (const auto& row : gm) {
        if (static_cast<int>(row.size()) != sigma) throw WeightSpecError("spod: gamma_nu rows need sigma entries");
      }
      spec.family = WeightFamily::spod(d, sigma, detail::parse_big_gamma(doc, d * sigma + 1, a), gm);
    } else {
      throw WeightSpecError("kind: expected product|order_dependent|finite_order|pod|spod");
    }
    return spec;
  } catch (const WeightSpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw WeightSpecError(std::string("weight spec: ") + e.what());
  }
}

inline WeightSpec parse_weight_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw WeightSpecError(std::string("weight spec: invalid JSON: ") + e.what());
  }
  return parse_weight_spec(doc);
}

// Canonical serialization: named generators are constructors, so documents
// always round-trip through explicit arrays.
inline json weight_spec_to_json(const WeightFamily& w, int alpha = 0) {
  json doc;
  doc["kind"] = weight_kind_name(w.kind);
  doc["d"] = w.d;
  if (alpha > 0) doc["alpha"] = alpha;
  switch (w.kind) {
    case WeightKind::kProduct:
      doc["gamma"] = json{{"explicit", w.gamma_j}};
      break;
    case WeightKind::kOrderDependent:
      doc["Gamma"] = json{{"explicit", w.Gamma_ell}};
      break;
    case WeightKind::kFiniteOrder:
      doc["Gamma"] = json{{"explicit", std::vector<double>(w.Gamma_ell.begin(),
                                                           w.Gamma_ell.begin() + std::min(w.q, w.d) + 1)}};
      doc["q"] = w.q;
      break;
    case WeightKind::kPod:
      doc["gamma"] = json{{"explicit", w.gamma_j}};
      doc["Gamma"] = json{{"explicit", w.Gamma_ell}};
      break;
    case WeightKind::kSpod:
      doc["Gamma"] = json{{"explicit", w.Gamma_ell}};
      doc["sigma"] = w.sigma;
      doc["gamma_nu"] = w.gamma_j_nu;
      break;
  }
  return doc;
}

inline json generating_vector_to_json(const GeneratingVector& gv, const WeightFamily& w) {
  json doc;
  doc["n"] = gv.n;
  doc["d"] = gv.d;
  doc["alpha"] = gv.alpha;
  doc["weights"] = weight_spec_to_json(w, gv.alpha);
  doc["z"] = gv.z;
  doc["T"] = gv.T;
  doc["Sd"] = gv.Sd;
  doc["tie_break"] = "smallest_z";
  return doc;
}

struct ParsedVector {
  std::int64_t n = 0;
  int d = 0;
  int alpha = 0;
  std::vector<std::int64_t> z;
};

inline ParsedVector parse_generating_vector(const json& doc) {
  ParsedVector out;
  out.n = doc.at("n").get<std::int64_t>();
  out.d = doc.at("d").get<int>();
  out.alpha = doc.value("alpha", 0);
  out.z = doc.at("z").get<std::vector<std::int64_t>>();
  if (static_cast<int>(out.z.size()) != out.d) {
    throw std::runtime_error("generating vector document: z length != d");
  }
  return out;
}

// 17 significant digits: enough to round-trip any binary64 value.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// All-or-nothing file emission: write a sibling temp file, fsync-free rename
// into place.  A failure before the rename leaves no partial target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed for " + path + ": " + std::strerror(err));
  }
}

}  // namespace latcbc
