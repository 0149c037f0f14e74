#include "oup/model_json.hpp"

#include <fstream>

#include "oup/errors.hpp"

namespace oup {

nlohmann::json model_to_json(const OuModel& model) {
  return {{"p", model.order()}, {"phi", model.phi}, {"sigma2", model.sigma2}, {"mu", model.mu}};
}

OuModel model_from_json(const nlohmann::json& doc) {
  OuModel model;
  try {
    const auto p = doc.at("p").get<int>();
    model.phi = doc.at("phi").get<std::vector<double>>();
    model.sigma2 = doc.at("sigma2").get<double>();
    model.mu = doc.value("mu", 0.0);
    if (p != static_cast<int>(model.phi.size())) {
      throw ParseError("model p = " + std::to_string(p) + " but phi has " +
                       std::to_string(model.phi.size()) + " entries");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what());
  }
  try {
    model.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid model: ") + e.what());
  }
  return model;
}

OuModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

void write_model(const std::filesystem::path& path, const OuModel& model) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file " + path.string());
  out << model_to_json(model).dump(2) << '\n';
}

}  // namespace oup
