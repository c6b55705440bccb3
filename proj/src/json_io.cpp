#include "twc/json_io.hpp"

#include <fstream>

namespace twc {

using nlohmann::json;

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) rows.push_back(m.row(r));
  return rows;
}

Mat mat_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw TwcError(ErrorCode::SchemaError, std::string(what) + ": expected array of rows");
  Mat m((int)j.size(), (int)j[0].size());
  for (int r = 0; r < m.rows; ++r) {
    Vec row = j[r].get<Vec>();
    if ((int)row.size() != m.cols)
      throw TwcError(ErrorCode::SchemaError, std::string(what) + ": ragged rows");
    m.set_row(r, row);
  }
  return m;
}

int get_int(const json& j, const char* key) {
  if (!j.contains(key))
    throw TwcError(ErrorCode::SchemaError, std::string("missing field: ") + key);
  return j.at(key).get<int>();
}

}  // namespace

json channel_to_json(const TwoWayChannel& ch) {
  json j;
  j["kind"] = "twc";
  j["nx1"] = ch.nx1;
  j["nx2"] = ch.nx2;
  j["ny1"] = ch.ny1;
  j["ny2"] = ch.ny2;
  j["p"] = mat_to_json(ch.p);
  return j;
}

json channel_to_json(const MadbChannel& ch) {
  json j;
  j["kind"] = "madb";
  j["q"] = ch.q;
  j["ny3"] = ch.ny3;
  j["p_y3"] = mat_to_json(ch.p_y3);
  j["pz1"] = ch.pz1;
  j["pz2"] = ch.pz2;
  return j;
}

json channel_to_json(const MemoryChannelSpec& spec) {
  json j;
  j["kind"] = "memory";
  j["nx1"] = spec.nx1;
  j["nx2"] = spec.nx2;
  j["ny1"] = spec.ny1;
  j["ny2"] = spec.ny2;
  j["nz1"] = spec.nz1;
  j["nz2"] = spec.nz2;
  j["f1"] = spec.f1;
  j["f2"] = spec.f2;
  j["noise1"] = {{"T", mat_to_json(spec.noise1.T)}};
  j["noise2"] = {{"T", mat_to_json(spec.noise2.T)}};
  return j;
}

ChannelFile channel_from_json(const json& j) {
  std::string kind = j.value("kind", std::string());
  if (kind == "twc") {
    Mat p = mat_from_json(j.at("p"), "p");
    return validate_channel(p, get_int(j, "nx1"), get_int(j, "nx2"), get_int(j, "ny1"),
                            get_int(j, "ny2"));
  }
  if (kind == "madb") {
    Mat p = mat_from_json(j.at("p_y3"), "p_y3");
    return validate_madb(p, get_int(j, "q"), get_int(j, "ny3"), j.at("pz1").get<Vec>(),
                         j.at("pz2").get<Vec>());
  }
  if (kind == "memory") {
    MemoryChannelSpec spec;
    spec.nx1 = get_int(j, "nx1");
    spec.nx2 = get_int(j, "nx2");
    spec.ny1 = get_int(j, "ny1");
    spec.ny2 = get_int(j, "ny2");
    spec.nz1 = get_int(j, "nz1");
    spec.nz2 = get_int(j, "nz2");
    spec.f1 = j.at("f1").get<std::vector<int>>();
    spec.f2 = j.at("f2").get<std::vector<int>>();
    if ((int)spec.f1.size() != spec.nx1 * spec.nx2 * spec.nz1 ||
        (int)spec.f2.size() != spec.nx1 * spec.nx2 * spec.nz2)
      throw TwcError(ErrorCode::SchemaError, "f table sizes vs alphabets");
    spec.noise1 = MarkovNoise::make(mat_from_json(j.at("noise1").at("T"), "noise1.T"));
    spec.noise2 = MarkovNoise::make(mat_from_json(j.at("noise2").at("T"), "noise2.T"));
    return spec;
  }
  throw TwcError(ErrorCode::SchemaError, "unknown channel kind: '" + kind + "'");
}

ChannelFile load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TwcError(ErrorCode::SchemaError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw TwcError(ErrorCode::SchemaError, std::string("JSON parse error: ") + e.what());
  }
  return channel_from_json(j);
}

void save_channel_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw TwcError(ErrorCode::SchemaError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace twc
