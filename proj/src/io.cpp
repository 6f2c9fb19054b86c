#include "varifold_lab/io.hpp"

#include <fstream>
#include <sstream>

#include "varifold_lab/errors.hpp"

namespace vlab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

void expect_type(const Json& j, const std::string& type) {
  const auto& t = field(j, "type");
  if (!t.is_string() || t.get<std::string>() != type) {
    throw ConfigError("expected a document of type '" + type + "'");
  }
}

int int_field(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Json header(const char* type) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["type"] = type;
  return j;
}

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Plane& p) {
  Json a = Json::array();
  for (Eigen::Index c = 0; c < p.frame().cols(); ++c) a.push_back(to_json(Vec(p.frame().col(c))));
  return a;
}

Json to_json(const SimplicialSet& e) {
  Json j = header("simplicial_set");
  j["ambient_dim"] = e.ambient_dim();
  j["dim"] = e.dim();
  Json verts = Json::array();
  for (const auto& v : e.vertices()) verts.push_back(to_json(v));
  j["vertices"] = std::move(verts);
  Json simp = Json::array();
  for (const auto& s : e.simplices()) simp.push_back(s);
  j["simplices"] = std::move(simp);
  return j;
}

Json to_json(const PointCloudSet& e) {
  Json j = header("point_cloud");
  j["ambient_dim"] = e.ambient_dim;
  j["dim"] = e.dim;
  Json pts = Json::array();
  for (const auto& p : e.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  j["masses"] = e.masses;
  return j;
}

Json to_json(const DiscreteVarifold& v) {
  Json j = header("varifold");
  j["ambient_dim"] = v.ambient_dim();
  j["dim"] = v.dim();
  Json atoms = Json::array();
  for (const auto& a : v.atoms()) {
    Json aj;
    aj["position"] = to_json(a.position);
    aj["plane"] = to_json(a.plane);
    aj["mass"] = a.mass;
    atoms.push_back(std::move(aj));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a nonempty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("expected a number in a coordinate array");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Plane plane_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("a plane is a nonempty list of spanning vectors");
  const Vec first = vec_from_json(j[0]);
  Mat span(first.size(), static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vec col = vec_from_json(j[c]);
    if (col.size() != first.size()) throw ConfigError("plane spanning vectors differ in length");
    span.col(static_cast<Eigen::Index>(c)) = col;
  }
  try {
    return Plane(span);
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid plane: ") + e.what());
  }
}

SimplicialSet simplicial_set_from_json(const Json& j) {
  expect_type(j, "simplicial_set");
  const int n = int_field(j, "ambient_dim");
  const int m = int_field(j, "dim");
  std::vector<Vec> verts;
  for (const auto& v : field(j, "vertices")) {
    verts.push_back(vec_from_json(v));
    if (verts.back().size() != n) throw ConfigError("vertex has the wrong dimension");
  }
  std::vector<SimplicialSet::Simplex> simp;
  for (const auto& s : field(j, "simplices")) {
    if (!s.is_array()) throw ConfigError("a simplex is an array of vertex indices");
    SimplicialSet::Simplex idx;
    for (const auto& i : s) {
      if (!i.is_number_integer()) throw ConfigError("vertex indices must be integers");
      idx.push_back(i.get<int>());
    }
    simp.push_back(std::move(idx));
  }
  try {
    return SimplicialSet(n, m, std::move(verts), std::move(simp));
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid simplicial set: ") + e.what());
  }
}

PointCloudSet point_cloud_from_json(const Json& j) {
  expect_type(j, "point_cloud");
  std::vector<Vec> pts;
  for (const auto& p : field(j, "points")) pts.push_back(vec_from_json(p));
  std::vector<double> masses;
  for (const auto& m : field(j, "masses")) {
    if (!m.is_number()) throw ConfigError("masses must be numbers");
    masses.push_back(m.get<double>());
  }
  try {
    return PointCloudSet(int_field(j, "ambient_dim"), int_field(j, "dim"), std::move(pts), std::move(masses));
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid point cloud: ") + e.what());
  }
}

DiscreteVarifold varifold_from_json(const Json& j) {
  expect_type(j, "varifold");
  std::vector<Atom> atoms;
  for (const auto& a : field(j, "atoms")) {
    const auto& mass = field(a, "mass");
    if (!mass.is_number()) throw ConfigError("atom mass must be a number");
    atoms.push_back({vec_from_json(field(a, "position")), plane_from_json(field(a, "plane")), mass.get<double>()});
  }
  try {
    return DiscreteVarifold(int_field(j, "ambient_dim"), int_field(j, "dim"), std::move(atoms));
  } catch (const InputError& e) {
    throw ConfigError(std::string("invalid varifold: ") + e.what());
  }
}

SampledSet sampled_set_from_json(const Json& j) {
  const auto& t = field(j, "type");
  if (t == "simplicial_set") return simplicial_set_from_json(j);
  if (t == "point_cloud") return point_cloud_from_json(j);
  throw ConfigError("expected a simplicial_set or point_cloud document");
}

DiscreteVarifold varifold_or_set_from_json(const Json& j, std::uint64_t seed) {
  const auto& t = field(j, "type");
  if (t == "varifold") return varifold_from_json(j);
  if (t == "simplicial_set") return var_of_set(simplicial_set_from_json(j), 1);
  if (t == "point_cloud") {
    const PointCloudSet pc = point_cloud_from_json(j);
    return var_of_pointcloud(pc, haar_sample(pc.ambient_dim, pc.dim, 16, seed));
  }
  throw ConfigError("expected a varifold, simplicial_set or point_cloud document");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace vlab
