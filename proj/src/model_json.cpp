#include "riskexit/model_json.hpp"

#include <fstream>
#include <sstream>

namespace riskexit {

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw std::invalid_argument(std::string("model json: missing numeric field '") +
                                key + "'");
  return j.at(key).get<double>();
}

ClaimDistribution claims_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("model json: claims must be an object with a type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "exp") return ClaimDistribution::exponential(number_field(j, "b"));
  if (type == "table") {
    if (!j.contains("q") || !j.contains("x"))
      throw std::invalid_argument("model json: table claims need arrays q and x");
    return ClaimDistribution::table(j.at("q").get<std::vector<double>>(),
                                    j.at("x").get<std::vector<double>>());
  }
  throw std::invalid_argument("model json: unknown claims type '" + type + "'");
}

}  // namespace

ModelParams model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model json: expected an object");
  if (!j.contains("claims"))
    throw std::invalid_argument("model json: missing field 'claims'");
  return make_model(number_field(j, "lambda"), number_field(j, "p"),
                    number_field(j, "c"), claims_from_json(j.at("claims")));
}

ModelParams model_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model json: parse error: ") + e.what());
  }
  return model_from_json(j);
}

ModelParams model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("model json: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str());
}

}  // namespace riskexit
