#include "torusdirac/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "torusdirac/errors.hpp"

namespace torusdirac {

namespace {

using nlohmann::json;

constexpr const char* kFieldFormat = "torusdirac-spinor-field";
constexpr int kFieldVersion = 1;

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

Vec2 vec(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
    throw FormatError(std::string("expected a two-element array '") + key + "'");
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

int bit(const json& j) {
  const int v = j.get<int>();
  if (v != 0 && v != 1) throw FormatError("spin parities must be 0 or 1");
  return v;
}

}  // namespace

std::string lattice_to_json(const LatticeBasis& basis, const SpinStructure& spin) {
  json j;
  j["v1"] = {basis.v1.x(), basis.v1.y()};
  j["v2"] = {basis.v2.x(), basis.v2.y()};
  j["eps"] = {spin.eps1, spin.eps2};
  return j.dump();
}

std::pair<LatticeBasis, SpinStructure> lattice_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    LatticeBasis b{vec(j, "v1"), vec(j, "v2")};
    SpinStructure s;
    if (j.contains("eps")) {
      if (!j["eps"].is_array() || j["eps"].size() != 2) throw FormatError("'eps' must have two entries");
      s = {bit(j["eps"][0]), bit(j["eps"][1])};
    }
    return {b, s};
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad lattice JSON: ") + e.what());
  }
}

std::vector<ModuliPoint> points_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_array()) throw FormatError("point list must be a JSON array");
  std::vector<ModuliPoint> out;
  try {
    for (const json& p : j) {
      if (p.is_array() && p.size() == 2)
        out.push_back({p[0].get<double>(), p[1].get<double>()});
      else if (p.is_object())
        out.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
      else
        throw FormatError("each point must be {\"x\":..,\"y\":..} or [x, y]");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad point list: ") + e.what());
  }
  return out;
}

std::string points_to_json(const std::vector<ModuliPoint>& points) {
  json j = json::array();
  for (const ModuliPoint& p : points) j.push_back({{"x", p.x}, {"y", p.y}});
  return j.dump();
}

void write_field(std::ostream& out, const SpinorField& f) {
  json h;
  h["format"] = kFieldFormat;
  h["version"] = kFieldVersion;
  h["basis"] = {{"v1", {f.basis().v1.x(), f.basis().v1.y()}}, {"v2", {f.basis().v2.x(), f.basis().v2.y()}}};
  h["eps"] = {f.spin().eps1, f.spin().eps2};
  h["window"] = {f.window().n1, f.window().n2};
  h["encoding"] = "f64le-interleaved";
  out << h.dump() << '\n';
  const Eigen::VectorXcd& c = f.coefficients();
  out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(cplx)));
  if (!out) throw FormatError("failed to write spinor field");
}

SpinorField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing spinor field header");
  const json h = parse(line);
  try {
    if (h.at("format") != kFieldFormat || h.at("version") != kFieldVersion)
      throw FormatError("unsupported spinor field format");
    if (h.at("encoding") != "f64le-interleaved") throw FormatError("unsupported coefficient encoding");
    const LatticeBasis b{vec(h.at("basis"), "v1"), vec(h.at("basis"), "v2")};
    const SpinStructure s{bit(h.at("eps")[0]), bit(h.at("eps")[1])};
    const ModeWindow w{h.at("window")[0].get<int>(), h.at("window")[1].get<int>()};
    if (w.n1 < 0 || w.n2 < 0) throw FormatError("negative mode window");
    SpinorField f(b, s, w);
    Eigen::VectorXcd& c = f.coefficients();
    in.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(cplx)));
    if (in.gcount() != static_cast<std::streamsize>(c.size() * sizeof(cplx)))
      throw FormatError("truncated coefficient block");
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad spinor field header: ") + e.what());
  }
}

void write_field(const std::string& path, const SpinorField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_field(out, f);
}

SpinorField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_field(in);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FormatError("failed to write '" + path + "'");
}

}  // namespace torusdirac
