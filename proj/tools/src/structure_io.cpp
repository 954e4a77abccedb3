#include "ritzbound_cli/structure_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "ritzbound/error.hpp"

namespace ritzbound::cli {

namespace {

using nlohmann::json;

DenseVector vector_field(const json &doc, const char *key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw InvalidArgument(std::string("structure: missing field '") + key + "'");
  }
  if (!it->is_array()) {
    throw InvalidArgument(std::string("structure: field '") + key + "' must be an array");
  }
  DenseVector v(static_cast<Index>(it->size()));
  Index i = 0;
  for (const json &x : *it) {
    if (!x.is_number()) {
      throw InvalidArgument(std::string("structure: field '") + key + "' must hold numbers");
    }
    v[i++] = x.get<double>();
  }
  return v;
}

std::optional<DenseVector> optional_vector(const json &doc, const char *key) {
  if (!doc.contains(key) || doc.at(key).is_null()) {
    return std::nullopt;
  }
  return vector_field(doc, key);
}

json to_array(const DenseVector &v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

void require_length(const DenseVector &v, Index k, const char *key) {
  if (v.size() != k) {
    throw InvalidArgument(std::string("structure: '") + key + "' must have as many entries as theta");
  }
}

void require_nonnegative(const DenseVector &v, const char *key) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      throw InvalidArgument(std::string("structure: '") + key +
                            "' must hold finite nonnegative values");
    }
  }
}

} // namespace

Structure parse_structure(std::istream &in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument(std::string("structure: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw InvalidArgument("structure: top level must be an object");
  }
  const std::string kind = doc.value("kind", "");
  const DenseVector theta = vector_field(doc, "theta");
  const Index k = theta.size();
  if (k == 0) {
    throw InvalidArgument("structure: theta is empty");
  }
  if (kind == "symmetric") {
    SymmetricPerturbation p;
    p.theta = Spectrum(theta, SortOrder::ascending).values();
    p.residual_norms = vector_field(doc, "residual_norms_e");
    require_length(p.residual_norms, k, "residual_norms_e");
    require_nonnegative(p.residual_norms, "residual_norms_e");
    if (auto t = optional_vector(doc, "tail_spectrum")) {
      p.tail_spectrum = Spectrum(std::move(*t), SortOrder::ascending);
    }
    if (auto t = optional_vector(doc, "tail_estimate")) {
      p.tail_estimate = Spectrum(std::move(*t), SortOrder::ascending);
    }
    return p;
  }
  if (kind == "svd") {
    SvdPerturbation p;
    p.theta = Spectrum(theta, SortOrder::descending).values();
    p.residual_norms_e = vector_field(doc, "residual_norms_e");
    p.residual_norms_f = vector_field(doc, "residual_norms_f");
    require_length(p.residual_norms_e, k, "residual_norms_e");
    require_length(p.residual_norms_f, k, "residual_norms_f");
    require_nonnegative(p.residual_norms_e, "residual_norms_e");
    require_nonnegative(p.residual_norms_f, "residual_norms_f");
    if (auto t = optional_vector(doc, "tail_spectrum")) {
      p.tail_spectrum = Spectrum(std::move(*t), SortOrder::descending);
    }
    return p;
  }
  throw InvalidArgument("structure: kind must be 'symmetric' or 'svd'");
}

Structure read_structure(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return parse_structure(in);
}

void write_structure(const Structure &s, std::ostream &out) {
  json doc;
  if (const auto *p = std::get_if<SymmetricPerturbation>(&s)) {
    doc["kind"] = "symmetric";
    doc["theta"] = to_array(p->theta);
    doc["residual_norms_e"] = to_array(p->residual_norms);
    if (p->tail_spectrum) {
      doc["tail_spectrum"] = to_array(p->tail_spectrum->values());
    }
    if (p->tail_estimate) {
      doc["tail_estimate"] = to_array(p->tail_estimate->values());
    }
  } else {
    const auto &q = std::get<SvdPerturbation>(s);
    doc["kind"] = "svd";
    doc["theta"] = to_array(q.theta);
    doc["residual_norms_e"] = to_array(q.residual_norms_e);
    doc["residual_norms_f"] = to_array(q.residual_norms_f);
    if (q.tail_spectrum) {
      doc["tail_spectrum"] = to_array(q.tail_spectrum->values());
    }
  }
  out << doc.dump(2) << '\n';
}

void write_structure(const Structure &s, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  write_structure(s, out);
  out.close();
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

} // namespace ritzbound::cli
