#include "abx/model_io.hpp"

#include <fstream>

#include "abx/errors.hpp"

namespace abx {

namespace {

using nlohmann::json;

std::vector<double> parse_tau(const json& t, int K) {
  if (t.is_array()) return t.get<std::vector<double>>();
  if (t.is_object()) {
    std::string form = t.value("form", "");
    if (form != "linear") throw ValidationError("tau.form must be \"linear\"");
    if (!t.contains("tau_bar")) throw ValidationError("tau.tau_bar missing");
    double tb = t.at("tau_bar").get<double>();
    if (K < 1) throw ValidationError("K must be known before a linear tau can be expanded");
    std::vector<double> tau(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k) tau[k - 1] = k * tb;
    return tau;
  }
  throw ValidationError("tau must be an array or {\"form\":\"linear\",\"tau_bar\":x}");
}

std::vector<CustomerType> parse_types(const json& arr) {
  if (!arr.is_array()) throw ValidationError("customer types must be an array");
  std::vector<CustomerType> out;
  for (const auto& e : arr) {
    CustomerType c;
    c.rate = e.at("rate").get<double>();
    c.booking = e.at("booking").get<std::vector<double>>();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

PlatformModel model_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ValidationError("model document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
      if (key != "K" && key != "lambda" && key != "tau" && key != "p0" && key != "p1" && key != "types") {
        throw ValidationError("unknown model key: " + key);
      }
    }
    if (!doc.contains("tau")) throw ValidationError("model needs tau");
    if (doc.contains("types")) {
      const auto& types = doc.at("types");
      auto control = parse_types(types.at("control"));
      auto treatment = parse_types(types.at("treatment"));
      int K = control.empty() ? 0 : static_cast<int>(control.front().booking.size()) - 1;
      return aggregate_types(control, treatment, parse_tau(doc.at("tau"), K));
    }
    PlatformModel m;
    m.K = doc.at("K").get<int>();
    m.lambda = doc.at("lambda").get<double>();
    m.tau = parse_tau(doc.at("tau"), m.K);
    m.p0 = doc.at("p0").get<std::vector<double>>();
    m.p1 = doc.at("p1").get<std::vector<double>>();
    validate(m);
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
}

json model_to_json(const PlatformModel& m) {
  return json{{"K", m.K}, {"lambda", m.lambda}, {"tau", m.tau}, {"p0", m.p0}, {"p1", m.p1}};
}

PlatformModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace abx
