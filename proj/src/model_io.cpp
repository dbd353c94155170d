#include "balens/model_io.hpp"

#include <fstream>

#include "balens/errors.hpp"

namespace balens {

namespace {

using nlohmann::ordered_json;

ordered_json node_to_json(const TreeNode& node) {
  ordered_json j;
  if (node.is_leaf()) {
    j["leaf"] = {{"positive", node.weight_pos}, {"negative", node.weight_neg}};
    return j;
  }
  j["split"] = {{"feature", node.feature},
                {"threshold", node.threshold},
                {"positive", node.weight_pos},
                {"negative", node.weight_neg},
                {"left", node_to_json(*node.left)},
                {"right", node_to_json(*node.right)}};
  return j;
}

std::unique_ptr<TreeNode> node_from_json(const ordered_json& j) {
  auto node = std::make_unique<TreeNode>();
  if (j.contains("leaf")) {
    const auto& leaf = j.at("leaf");
    node->weight_pos = leaf.at("positive").get<double>();
    node->weight_neg = leaf.at("negative").get<double>();
    return node;
  }
  if (!j.contains("split")) throw InvalidArgument("model json: node is neither split nor leaf");
  const auto& split = j.at("split");
  node->feature = split.at("feature").get<std::int32_t>();
  if (node->feature < 0) throw InvalidArgument("model json: split with negative feature");
  node->threshold = split.at("threshold").get<double>();
  node->weight_pos = split.at("positive").get<double>();
  node->weight_neg = split.at("negative").get<double>();
  node->left = node_from_json(split.at("left"));
  node->right = node_from_json(split.at("right"));
  return node;
}

ordered_json tree_params_to_json(const TreeParams& params) {
  return {{"max_depth", params.max_depth},
          {"min_split", params.min_split},
          {"min_leaf", params.min_leaf},
          {"features_per_split", params.features_per_split}};
}

TreeParams tree_params_from_json(const ordered_json& j) {
  TreeParams params;
  params.max_depth = j.at("max_depth").get<std::size_t>();
  params.min_split = j.at("min_split").get<std::size_t>();
  params.min_leaf = j.at("min_leaf").get<std::size_t>();
  params.features_per_split = j.at("features_per_split").get<std::size_t>();
  return params;
}

}  // namespace

ordered_json tree_to_json(const TreeModel& model) {
  if (!model.root) throw InvalidArgument("tree_to_json: unfitted tree");
  ordered_json j;
  j["params"] = tree_params_to_json(model.params);
  j["importances"] = model.importances;
  j["root"] = node_to_json(*model.root);
  return j;
}

TreeModel tree_from_json(const ordered_json& j) {
  TreeModel model;
  model.params = tree_params_from_json(j.at("params"));
  model.importances = j.at("importances").get<std::vector<double>>();
  model.root = node_from_json(j.at("root"));
  return model;
}

ordered_json ensemble_to_json(const EnsembleModel& model) {
  ordered_json j;
  j["kind"] = kind_name(model.kind);
  j["seed"] = model.seed;
  j["params"] = {{"n_estimators", model.params.n_estimators},
                 {"boost_rounds", model.params.boost_rounds},
                 {"tree", tree_params_to_json(model.params.tree)}};
  ordered_json columns = ordered_json::array();
  for (const EncodedColumn& col : model.columns) {
    columns.push_back(
        {{"name", col.name},
         {"category", col.category},
         {"origin",
          {{"name", col.origin.name},
           {"kind", col.origin.kind == FeatureKind::Numeric ? "numeric" : "categorical"},
           {"index", col.origin.index}}}});
  }
  j["columns"] = std::move(columns);
  j["subset_sizes"] = model.subset_sizes;
  j["importances"] = model.importances;
  ordered_json members = ordered_json::array();
  for (const EnsembleMember& member : model.members) {
    members.push_back({{"alpha", member.alpha},
                       {"train_pos", member.train_pos},
                       {"train_neg", member.train_neg},
                       {"tree", tree_to_json(member.tree)}});
  }
  j["members"] = std::move(members);
  return j;
}

EnsembleModel ensemble_from_json(const ordered_json& j) {
  EnsembleModel model;
  model.kind = kind_from_name(j.at("kind").get<std::string>());
  model.seed = j.at("seed").get<std::uint64_t>();
  const auto& params = j.at("params");
  model.params.n_estimators = params.at("n_estimators").get<std::size_t>();
  model.params.boost_rounds = params.at("boost_rounds").get<std::size_t>();
  model.params.tree = tree_params_from_json(params.at("tree"));
  for (const auto& col : j.at("columns")) {
    EncodedColumn out;
    out.name = col.at("name").get<std::string>();
    out.category = col.at("category").get<std::string>();
    const auto& origin = col.at("origin");
    out.origin.name = origin.at("name").get<std::string>();
    const std::string kind = origin.at("kind").get<std::string>();
    if (kind != "numeric" && kind != "categorical") {
      throw InvalidArgument("model json: unknown feature kind '" + kind + "'");
    }
    out.origin.kind = kind == "numeric" ? FeatureKind::Numeric : FeatureKind::Categorical;
    out.origin.index = origin.at("index").get<std::size_t>();
    model.columns.push_back(std::move(out));
  }
  model.subset_sizes = j.at("subset_sizes").get<std::vector<std::size_t>>();
  model.importances = j.at("importances").get<std::vector<double>>();
  for (const auto& member : j.at("members")) {
    EnsembleMember out;
    out.alpha = member.at("alpha").get<double>();
    out.train_pos = member.at("train_pos").get<std::size_t>();
    out.train_neg = member.at("train_neg").get<std::size_t>();
    out.tree = tree_from_json(member.at("tree"));
    model.members.push_back(std::move(out));
  }
  if (model.members.empty()) throw InvalidArgument("model json: no members");
  return model;
}

void save_ensemble(const EnsembleModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << ensemble_to_json(model).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

EnsembleModel load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("model json: " + std::string(e.what()));
  }
  try {
    return ensemble_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("model json: " + std::string(e.what()));
  }
}

}  // namespace balens
