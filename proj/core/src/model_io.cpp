#include "sgrlab/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgrlab/error.hpp"

namespace sgrlab {
namespace {

using nlohmann::json;

double number_at(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + " must be a number");
  return j.get<double>();
}

Vector parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number_at(j[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a nonempty array of rows");
  const auto rows = j.size();
  if (!j[0].is_array()) throw ValidationError(what + " rows must be arrays");
  const auto cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      throw ValidationError(what + " is ragged: row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          number_at(row[k], what + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

EnvironmentChain parse_chain(const json& doc) {
  if (!doc.contains("chain") || !doc["chain"].is_object()) {
    throw ValidationError("model needs a \"chain\" object");
  }
  const auto& c = doc["chain"];
  const std::string type = c.value("type", "");
  if (type == "iid") {
    if (!c.contains("pi")) throw ValidationError("iid chain needs \"pi\"");
    return EnvironmentChain::iid(parse_vector(c["pi"], "chain.pi"));
  }
  if (type == "markov") {
    if (!c.contains("P")) throw ValidationError("markov chain needs \"P\"");
    return EnvironmentChain::markov(parse_matrix(c["P"], "chain.P"));
  }
  throw ValidationError("chain.type must be \"iid\" or \"markov\", got \"" + type + "\"");
}

EnvironmentSet parse_leslie2(const json& list) {
  if (!list.is_array() || list.empty()) {
    throw ValidationError("\"leslie2\" must be a nonempty array of {f, F, s}");
  }
  std::vector<LeslieRates> rates;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& e = list[k];
    const std::string at = "leslie2[" + std::to_string(k) + "]";
    if (!e.is_object() || !e.contains("f") || !e.contains("F") || !e.contains("s")) {
      throw ValidationError(at + " needs numeric fields f, F and s");
    }
    rates.push_back({number_at(e["f"], at + ".f"), number_at(e["F"], at + ".F"),
                     number_at(e["s"], at + ".s")});
  }
  return Leslie2Params(std::move(rates)).to_environment_set();
}

EnvironmentSet parse_environments(const json& doc) {
  if (!doc.contains("environments") || !doc["environments"].is_array()) {
    throw ValidationError("model needs \"environments\" (or the \"leslie2\" shorthand)");
  }
  const auto& list = doc["environments"];
  std::vector<ProjectionMatrix> envs;
  std::vector<std::string> labels;
  bool any_label = false;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& e = list[k];
    const std::string at = "environments[" + std::to_string(k) + "]";
    if (!e.is_object() || !e.contains("matrix")) throw ValidationError(at + " needs \"matrix\"");
    envs.emplace_back(parse_matrix(e["matrix"], at + ".matrix"));
    if (e.contains("label")) {
      if (!e["label"].is_string()) throw ValidationError(at + ".label must be a string");
      labels.push_back(e["label"].get<std::string>());
      any_label = true;
    } else {
      labels.push_back("env" + std::to_string(k + 1));
    }
  }
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw ValidationError("\"n\" must be an integer");
    const auto n = doc["n"].get<long long>();
    if (!envs.empty() && n != envs.front().dim()) {
      throw ValidationError("\"n\" = " + std::to_string(n) +
                            " does not match the matrix dimension " +
                            std::to_string(envs.front().dim()));
    }
  } else {
    throw ValidationError("matrix-form model needs \"n\"");
  }
  if (!any_label) labels.clear();
  return EnvironmentSet(std::move(envs), std::move(labels));
}

}  // namespace

ModelSpec parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");

  EnvironmentSet envs = doc.contains("leslie2") ? parse_leslie2(doc["leslie2"])
                                                 : parse_environments(doc);
  EnvironmentChain chain = parse_chain(doc);
  std::optional<Vector> z0;
  if (doc.contains("z0") && !doc["z0"].is_null()) z0 = parse_vector(doc["z0"], "z0");
  return ModelSpec(std::move(envs), std::move(chain), std::move(z0));
}

ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string model_to_json(const ModelSpec& model, int indent) {
  auto matrix_json = [](const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vector_json = [](const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
  };

  json doc;
  doc["n"] = model.dim();
  json envs = json::array();
  const auto& labels = model.envs().labels();
  for (std::size_t k = 0; k < model.envs().size(); ++k) {
    json e;
    if (!labels.empty()) e["label"] = labels[k];
    e["matrix"] = matrix_json(model.envs()[k].matrix());
    envs.push_back(std::move(e));
  }
  doc["environments"] = std::move(envs);
  if (model.chain().is_iid()) {
    doc["chain"] = {{"type", "iid"}, {"pi", vector_json(model.chain().pi())}};
  } else {
    doc["chain"] = {{"type", "markov"}, {"P", matrix_json(model.chain().transition())}};
  }
  if (model.z0()) doc["z0"] = vector_json(*model.z0());
  return doc.dump(indent);
}

}  // namespace sgrlab
