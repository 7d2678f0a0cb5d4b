#include "frem/serialize.hpp"

#include "frem/error.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace frem {

using nlohmann::json;

namespace {

template<class T>
T
field(const json& j, const char* key)
{
  if (!j.is_object() || !j.contains(key))
    raise(ErrorCode::SchemaError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    raise(ErrorCode::SchemaError, std::string("field '") + key + "' has the wrong type");
  }
}

json
optional_number(const std::optional<double>& v)
{
  return v ? json(*v) : json(nullptr);
}

std::optional<double>
read_optional(const json& j, const char* key)
{
  if (!j.contains(key) || j.at(key).is_null())
    return std::nullopt;
  return field<double>(j, key);
}

} // namespace

std::string
model_to_json(const FremModel& model)
{
  json j;
  j["format"] = "frem-model";
  j["version"] = kModelFormatVersion;
  const Grid& g = model.curves.grid();
  j["grid"] = std::vector<double>(g.points().begin(), g.points().end());
  json curves = json::array();
  for (Eigen::Index i = 0; i < model.curves.values().rows(); ++i) {
    const Eigen::VectorXd row = model.curves.values().row(i).transpose();
    curves.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  j["curves"] = std::move(curves);
  j["responses"] =
    std::vector<double>(model.responses.data(), model.responses.data() + model.responses.size());
  j["dim"] = { { "raw", model.dim.raw },
               { "rounded", model.dim.rounded },
               { "delta", model.dim.delta },
               { "per_k", model.dim.per_k } };
  j["h_pca"] = model.h_pca;
  j["h_reg"] = model.h_reg;
  j["recovery"] = { { "nu", model.recovery.nu },
                    { "candidate_count", model.recovery.candidate_count },
                    { "candidate_spread", model.recovery.candidate_spread },
                    { "fixed_bandwidth", optional_number(model.recovery.fixed_bandwidth) },
                    { "ridge", optional_number(model.recovery.ridge) } };
  j["domain"] = { model.domain.lower, model.domain.upper };
  j["tangent"] = { { "min_neighbors", model.tangent.min_neighbors },
                   { "growth", model.tangent.growth },
                   { "max_growth_steps", model.tangent.max_growth_steps } };
  return j.dump(1) + "\n";
}

FremModel
model_from_json(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ParseError, std::string("model file: ") + e.what());
  }
  if (field<std::string>(j, "format") != "frem-model")
    raise(ErrorCode::SchemaError, "not a frem model file");
  const int version = field<int>(j, "version");
  if (version != kModelFormatVersion)
    raise(ErrorCode::SchemaError, "unsupported model version " + std::to_string(version));

  FremModel m;
  const auto grid = std::make_shared<const Grid>(field<std::vector<double>>(j, "grid"));
  const auto rows = field<std::vector<std::vector<double>>>(j, "curves");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != grid->size())
      raise(ErrorCode::SchemaError, "curve " + std::to_string(i) + " does not match the grid");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  m.curves = CurveSet(grid, std::move(values));
  const auto y = field<std::vector<double>>(j, "responses");
  m.responses = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));

  const json dim = field<json>(j, "dim");
  m.dim.raw = field<double>(dim, "raw");
  m.dim.rounded = field<int>(dim, "rounded");
  m.dim.delta = field<double>(dim, "delta");
  m.dim.per_k = field<std::vector<double>>(dim, "per_k");
  m.h_pca = field<double>(j, "h_pca");
  m.h_reg = field<double>(j, "h_reg");

  const json rec = field<json>(j, "recovery");
  m.recovery.nu = field<double>(rec, "nu");
  m.recovery.candidate_count = field<std::size_t>(rec, "candidate_count");
  m.recovery.candidate_spread = field<double>(rec, "candidate_spread");
  m.recovery.fixed_bandwidth = read_optional(rec, "fixed_bandwidth");
  m.recovery.ridge = read_optional(rec, "ridge");

  const auto dom = field<std::vector<double>>(j, "domain");
  if (dom.size() != 2)
    raise(ErrorCode::SchemaError, "domain must hold two numbers");
  m.domain = { dom[0], dom[1] };

  const json tan = field<json>(j, "tangent");
  m.tangent.min_neighbors = field<std::size_t>(tan, "min_neighbors");
  m.tangent.growth = field<double>(tan, "growth");
  m.tangent.max_growth_steps = field<std::size_t>(tan, "max_growth_steps");

  try {
    m.validate();
  } catch (const Error& e) {
    raise(ErrorCode::SchemaError, "model file is inconsistent: " + e.message());
  }
  return m;
}

std::string
read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void
write_text_file(const std::filesystem::path& path, std::string_view text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    raise(ErrorCode::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    raise(ErrorCode::IoError, "write failed for " + path.string());
}

void
save_model(const FremModel& model, const std::filesystem::path& path)
{
  write_text_file(path, model_to_json(model));
}

FremModel
load_model(const std::filesystem::path& path)
{
  return model_from_json(read_text_file(path));
}

} // namespace frem
