#include "gaussbalance/json_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gaussbalance {
namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("json: " + what); }

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object()) fail("expected an object");
  const auto it = doc.find(name);
  if (it == doc.end()) fail(std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& v, const char* name) {
  if (!v.is_number()) fail(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

int integer(const Json& v, const char* name) {
  if (!v.is_number_integer()) fail(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

Vec vector_of(const Json& v, const char* name) {
  if (!v.is_array() || v.empty()) fail(std::string("field '") + name + "' must be a non-empty array");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], name);
  return out;
}

Mat matrix_of(const Json& v, const char* name) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) fail(std::string("field '") + name + "' must be a 2-D array");
  const auto rows = v.size();
  const auto cols = v[0].size();
  Mat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) fail(std::string("field '") + name + "' has ragged rows");
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(v[i][j], name);
  }
  return out;
}

Json array_of(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json rows_of(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(array_of(m.row(i).transpose()));
  return out;
}

std::optional<double> optional_number(const Json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return number(*it, name);
}

}  // namespace

Json region_to_json(const HypographRegion& region) {
  Json knots = Json::array();
  for (const auto& k : region.knots()) knots.push_back({k.y, k.t});
  Json doc;
  doc["knots"] = knots;
  doc["left_slope"] = region.left_slope() ? Json(*region.left_slope()) : Json(nullptr);
  doc["right_slope"] = region.right_slope() ? Json(*region.right_slope()) : Json(nullptr);
  doc["clip"] = region.clip();
  return doc;
}

HypographRegion region_from_json(const Json& doc) {
  const Json& knots = field(doc, "knots");
  if (!knots.is_array() || knots.empty()) fail("field 'knots' must be a non-empty array");
  std::vector<Knot> ks;
  for (const auto& k : knots) {
    if (!k.is_array() || k.size() != 2) fail("each knot must be a [y, t] pair");
    ks.push_back({number(k[0], "knots"), number(k[1], "knots")});
  }
  const auto clip_it = doc.find("clip");
  const double clip = clip_it == doc.end() ? HypographRegion::kDefaultClip : number(*clip_it, "clip");
  return HypographRegion(std::move(ks), optional_number(doc, "left_slope"), optional_number(doc, "right_slope"), clip);
}

Json body_to_json(const ConvexBody& body) {
  Json doc;
  doc["kind"] = to_string(body.kind());
  if (const auto* b = dynamic_cast<const LpBall*>(&body)) {
    doc["p"] = std::isinf(b->p()) ? Json("inf") : Json(b->p());
    doc["n"] = b->dimension();
    doc["radius"] = b->radius();
  } else if (const auto* s = dynamic_cast<const Slab*>(&body)) {
    doc["normal"] = array_of(s->normal());
    doc["half_width"] = s->half_width();
  } else if (const auto* poly = dynamic_cast<const Polytope*>(&body)) {
    doc["A"] = rows_of(poly->A());
    doc["b"] = array_of(poly->b());
  } else if (const auto* c = dynamic_cast<const ShiftedCone*>(&body)) {
    doc["n"] = c->dimension();
    doc["d"] = c->d();
    doc["t"] = c->t();
    doc["s"] = c->s();
  } else if (const auto* sc = dynamic_cast<const ScaledBody*>(&body)) {
    doc["base"] = body_to_json(*sc->base());
    doc["factor"] = sc->factor();
  } else if (const auto* tr = dynamic_cast<const TranslatedBody*>(&body)) {
    doc["base"] = body_to_json(*tr->base());
    doc["shift"] = array_of(tr->shift());
  } else if (const auto* ex = dynamic_cast<const ExtendedBody*>(&body)) {
    doc["base"] = body_to_json(*ex->base());
  } else {
    fail("unsupported body type");
  }
  return doc;
}

BodyPtr body_from_json(const Json& doc) {
  const Json& kind_field = field(doc, "kind");
  if (!kind_field.is_string()) fail("field 'kind' must be a string");
  const auto kind = kind_field.get<std::string>();
  if (kind == "lp_ball") {
    const Json& p = field(doc, "p");
    double pv;
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") fail("field 'p' must be a number or \"inf\"");
      pv = kInfinityNorm;
    } else {
      pv = number(p, "p");
    }
    const auto r = doc.find("radius");
    return lp_ball(pv, integer(field(doc, "n"), "n"), r == doc.end() ? 1.0 : number(*r, "radius"));
  }
  if (kind == "slab") return slab(vector_of(field(doc, "normal"), "normal"), number(field(doc, "half_width"), "half_width"));
  if (kind == "polytope") return polytope(matrix_of(field(doc, "A"), "A"), vector_of(field(doc, "b"), "b"));
  if (kind == "shifted_cone")
    return shifted_cone(integer(field(doc, "n"), "n"), number(field(doc, "d"), "d"), number(field(doc, "t"), "t"),
                        number(field(doc, "s"), "s"));
  if (kind == "scaled") return scaled(body_from_json(field(doc, "base")), number(field(doc, "factor"), "factor"));
  if (kind == "translated") return translated(body_from_json(field(doc, "base")), vector_of(field(doc, "shift"), "shift"));
  if (kind == "extended") return extended(body_from_json(field(doc, "base")));
  fail("unknown body kind '" + kind + "'");
}

Json tuple_to_json(const VectorTuple& tuple) {
  Json vs = Json::array();
  for (const auto& v : tuple.vectors()) vs.push_back(array_of(v));
  Json doc;
  doc["vectors"] = vs;
  return doc;
}

VectorTuple tuple_from_json(const Json& doc) {
  const Json& vs = field(doc, "vectors");
  if (!vs.is_array() || vs.empty()) fail("field 'vectors' must be a non-empty array");
  std::vector<Vec> out;
  for (const auto& v : vs) out.push_back(vector_of(v, "vectors"));
  return VectorTuple(std::move(out));
}

Json basis_to_json(const LatticeBasis& basis) { return rows_of(basis.matrix()); }

LatticeBasis basis_from_json(const Json& doc) { return LatticeBasis(matrix_of(doc, "basis")); }

Json instance_to_json(const CounterexampleInstance& inst) {
  Json doc;
  doc["p"] = inst.p;
  doc["t"] = inst.t;
  doc["d"] = inst.d;
  doc["s"] = inst.s;
  doc["gamma"] = inst.gamma;
  doc["delta"] = inst.delta;
  doc["beta_lb"] = inst.beta_lb;
  doc["gamma_shifted"] = inst.gamma_shifted;
  doc["min_balance"] = inst.min_balance;
  doc["tuple"] = tuple_to_json(inst.tuple);
  return doc;
}

}  // namespace gaussbalance
