#pragma once

#include <CLI11.hpp>
#include <json.hpp>

namespace ranksieve::cli {

/// Lets `--config file.json` supply any long flag of the selected subcommand
/// as a top-level key ("eps-tilde": 5e-7, "no-sieve": true). A key naming a
/// subcommand may hold an object of flags for that subcommand only. Flags given
/// on the command line take precedence over the file.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? nlohmann::json(res.front()) : nlohmann::json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<std::string> parents;
    const auto selected = root_->get_subcommands();
    if (!selected.empty()) parents.push_back(selected.front()->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        if (parents.empty() || key != parents.front()) continue;
        for (const auto& [k, v] : value.items()) items.push_back(make_item(parents, k, v));
      } else {
        items.push_back(make_item(parents, key, value));
      }
    }
    return items;
  }

 private:
  static CLI::ConfigItem make_item(const std::vector<std::string>& parents, const std::string& key,
                                   const nlohmann::json& value) {
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array()) {
      for (const auto& v : value) item.inputs.push_back(scalar(key, v));
    } else {
      item.inputs.push_back(scalar(key, value));
    }
    return item;
  }


  static std::string scalar(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config: unsupported value for '" + key + "'");
  }

  const CLI::App* root_;
};

}  // namespace ranksieve::cli
