#include <filesystem>
#include <optional>

#include <json.hpp>

#include "cli_internal.hpp"
#include "geovec/error.hpp"
#include "geovec/hash.hpp"
#include "geovec/io/csv.hpp"

namespace geovec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Config problem: exit 2 naming the field.
class ConfigError : public UsageError {
 public:
  ConfigError(const std::string& field, const std::string& problem)
      : UsageError("config field '" + field + "': " + problem) {}
};

const json& member(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(field + "." + key, "missing");
  return obj.at(key);
}

std::string string_field(const json& obj, const std::string& key, const std::string& field) {
  const json& v = member(obj, key, field);
  if (!v.is_string()) throw ConfigError(field + "." + key, "must be a string");
  return v.get<std::string>();
}

std::string number_text(const json& v, const std::string& field, bool integer) {
  if (integer ? !v.is_number_integer() : !v.is_number()) {
    throw ConfigError(field, integer ? "must be an integer" : "must be a number");
  }
  return integer ? std::to_string(v.get<long long>()) : io::format_double(v.get<double>());
}

std::string one_of(const json& obj, const std::string& key, const std::string& field,
                   std::initializer_list<const char*> allowed) {
  const std::string v = string_field(obj, key, field);
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw ConfigError(field + "." + key, "unknown value '" + v + "' (expected one of " + list + ")");
}

class Pipeline {
 public:
  Pipeline(const fs::path& config_dir, const fs::path& out_dir, std::ostream& out, std::ostream& err)
      : config_dir_(config_dir), out_dir_(out_dir), out_(out), err_(err) {}

  std::string input(const json& obj, const std::string& key, const std::string& field) const {
    const fs::path p = config_dir_ / string_field(obj, key, field);
    if (!fs::is_regular_file(p)) throw ConfigError(field + "." + key, "file not found: " + p.string());
    return p.string();
  }

  std::string artifact(const std::string& rel) {
    const fs::path p = out_dir_ / rel;
    fs::create_directories(p.parent_path());
    artifacts_.push_back(rel);
    return p.string();
  }

  // Runs one subcommand; false when it failed.
  bool stage(const std::string& name, int (*cmd)(const Args&, std::ostream&, std::ostream&),
             const Args& args) {
    out_ << "[" << name << "] ";
    if (cmd(args, out_, err_) == kExitOk) return true;
    err_ << "pipeline: stage '" << name << "' failed\n";
    return false;
  }

  void write_manifest() const {
    json entries = json::array();
    for (const auto& rel : artifacts_) {
      const fs::path p = out_dir_ / rel;
      entries.push_back({{"path", fs::path(rel).generic_string()},
                         {"bytes", fs::file_size(p)},
                         {"hash", hash_hex(file_hash(p))}});
    }
    io::write_file((out_dir_ / "manifest.json").string(), json{{"artifacts", entries}}.dump(2) + "\n");
  }

 private:
  fs::path config_dir_;
  fs::path out_dir_;
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::string> artifacts_;
};

// Stage argument lists, resolved and validated before anything runs.
struct CityPlan {
  std::string prefix;
  Args regionalize, load, join, embed;
};

Args area_args(const Pipeline& p, const json& area, const std::string& field) {
  if (!area.is_object()) throw ConfigError(field, "must be an object");
  if (area.contains("path")) return {"--area", p.input(area, "path", field)};
  return {"--gazetteer", p.input(area, "gazetteer", field), "--name", string_field(area, "name", field)};
}

Args regionalizer_args(const Pipeline& p, const json& r) {
  const std::string field = "regionalizer";
  const std::string method = one_of(r, "method", field, {"hex", "slippy", "voronoi"});
  Args a{"--method", method};
  if (method == "hex") {
    a.insert(a.end(), {"--resolution", number_text(member(r, "resolution", field), field + ".resolution", true)});
  } else if (method == "slippy") {
    a.insert(a.end(), {"--zoom", number_text(member(r, "zoom", field), field + ".zoom", true)});
  } else {
    a.insert(a.end(), {"--seeds", p.input(r, "seeds", field)});
  }
  return a;
}

Args loader_args(const Pipeline& p, const json& l, const std::string& field) {
  const std::string kind = one_of(l, "kind", field, {"osm-xml", "geojson", "gtfs"});
  Args a{"--kind", kind, "--input", p.input(l, "path", field)};
  if (l.contains("filter")) {
    if (kind == "gtfs") throw ConfigError(field + ".filter", "gtfs loading takes no filter");
    a.insert(a.end(), {"--filter-json", l.at("filter").dump()});
  } else if (kind == "osm-xml") {
    throw ConfigError(field + ".filter", "missing");
  }
  return a;
}

Args embedder_params(const json& e, const std::string& kind, std::uint64_t seed) {
  const std::string field = "embedder.params";
  const json params = e.value("params", json::object());
  if (!params.is_object()) throw ConfigError(field, "must be an object");
  Args a;
  for (const auto& [key, v] : params.items()) {
    const std::string f = field + "." + key;
    if (key == "sizes" && kind == "hex2vec") {
      if (!v.is_array() || v.empty()) throw ConfigError(f, "must be a nonempty integer array");
      std::string list;
      for (const auto& s : v) list += (list.empty() ? "" : ",") + number_text(s, f, true);
      a.insert(a.end(), {"--sizes", list});
    } else if (key == "k" && kind == "contextual") {
      a.insert(a.end(), {"--k", number_text(v, f, true)});
    } else if ((key == "epochs" || key == "batch_size") && (kind == "hex2vec" || kind == "gtfs2vec")) {
      a.insert(a.end(), {key == "epochs" ? "--epochs" : "--batch-size", number_text(v, f, true)});
    } else if (key == "lr" && (kind == "hex2vec" || kind == "gtfs2vec")) {
      a.insert(a.end(), {"--lr", number_text(v, f, false)});
    } else if (key == "negatives" && kind == "hex2vec") {
      a.insert(a.end(), {"--negatives", number_text(v, f, true)});
    } else if ((key == "latent" || key == "hidden") && kind == "gtfs2vec") {
      a.insert(a.end(), {"--" + key, number_text(v, f, true)});
    } else {
      throw ConfigError(f, "not a parameter of the " + kind + " embedder");
    }
  }
  if (kind == "hex2vec" || kind == "gtfs2vec") a.insert(a.end(), {"--seed", std::to_string(seed)});
  return a;
}

}  // namespace

int cmd_pipeline(const Args& args, std::ostream& out, std::ostream& err) {
  std::string config_path, out_dir;
  bool failed = false;
  const int rc = run_command(
      "pipeline", "Run regionalize -> load -> join -> embed -> downstream from a JSON config", args,
      out, err,
      [&](CLI::App& app) {
        app.add_option("--config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
        app.add_option("--out-dir", out_dir, "Output directory")->required();
      },
      [&] {
        const json cfg = json::parse(io::read_file(config_path), nullptr, false);
        if (cfg.is_discarded() || !cfg.is_object()) throw UsageError("config is not a JSON object");
        Pipeline p(fs::path(config_path).parent_path(), out_dir, out, err);

        const json& seed_v = member(cfg, "seed", "config");
        if (!seed_v.is_number_unsigned()) throw ConfigError("seed", "must be a nonnegative integer");
        const auto seed = seed_v.get<std::uint64_t>();
        const Args region_method = regionalizer_args(p, member(cfg, "regionalizer", "config"));
        const json& embedder = member(cfg, "embedder", "config");
        const std::string kind = one_of(embedder, "kind", "embedder", {"count", "contextual", "hex2vec", "gtfs2vec"});
        const bool trained = kind == "hex2vec" || kind == "gtfs2vec";
        const Args params = embedder_params(embedder, kind, seed);

        json downstream = cfg.value("downstream", json::array());
        if (downstream.is_object()) downstream = json::array({downstream});
        if (!downstream.is_array()) throw ConfigError("downstream", "must be an object or an array");
        std::optional<Args> cluster, regression;
        for (std::size_t i = 0; i < downstream.size(); ++i) {
          const json& d = downstream[i];
          const std::string f = "downstream[" + std::to_string(i) + "]";
          const std::string dk = one_of(d, "kind", f, {"cluster", "regression", "none"});
          if (dk == "cluster") {
            cluster = Args{"--k", number_text(d.value("k", json(5)), f + ".k", true), "--seed", std::to_string(seed)};
          } else if (dk == "regression") {
            regression = Args{"--seed", std::to_string(seed)};
            if (d.contains("targets_csv")) {
              regression->insert(regression->end(), {"--targets", p.input(d, "targets_csv", f)});
            } else {
              regression->insert(regression->end(), {"--targets-geojson", p.input(d, "targets", f)});
            }
            if (d.contains("lambda")) regression->insert(regression->end(), {"--lambda", number_text(d.at("lambda"), f + ".lambda", false)});
            if (d.contains("test_fraction")) {
              regression->insert(regression->end(), {"--test-fraction", number_text(d.at("test_fraction"), f + ".test_fraction", false)});
            }
            if (d.contains("target")) regression->insert(regression->end(), {"--target-column", string_field(d, "target", f)});
          }
        }

        const json& loader = member(cfg, "loader", "config");
        std::optional<std::string> filter_json;
        if (loader.contains("filter")) filter_json = loader.at("filter").dump();
        if (kind != "gtfs2vec" && !filter_json) throw ConfigError("loader.filter", "needed by the " + kind + " embedder");

        auto plan_city = [&](const std::string& prefix, const json& area, const json& load, const std::string& field) {
          CityPlan c;
          c.prefix = prefix;
          c.regionalize = area_args(p, area, field + "area");
          c.regionalize.insert(c.regionalize.end(), region_method.begin(), region_method.end());
          c.load = loader_args(p, load, field + "loader");
          return c;
        };
        std::vector<CityPlan> cities{plan_city("", member(cfg, "area", "config"), loader, "")};
        if (cfg.contains("transfer")) {
          const json& t = cfg.at("transfer");
          cities.push_back(plan_city("transfer/", member(t, "area", "transfer"),
                                     t.value("loader", loader), "transfer."));
        }

        const std::string model = trained ? (fs::path(out_dir) / "embedder.model.json").string() : "";
        std::string ridge_model;
        for (std::size_t ci = 0; ci < cities.size() && !failed; ++ci) {
          CityPlan& c = cities[ci];
          const std::string regions = p.artifact(c.prefix + "regions.geojson");
          c.regionalize.insert(c.regionalize.end(), {"--out", regions});
          if (!p.stage(c.prefix + "regionalize", cmd_regionalize, c.regionalize)) { failed = true; break; }
          const std::string features = p.artifact(c.prefix + "features.geojson");
          c.load.insert(c.load.end(), {"--out", features});
          if (!p.stage(c.prefix + "load", cmd_load, c.load)) { failed = true; break; }
          const std::string joint = p.artifact(c.prefix + "joint.csv");
          if (!p.stage(c.prefix + "join", cmd_join, {"--regions", regions, "--features", features, "--out", joint})) {
            failed = true;
            break;
          }
          const std::string embeddings = p.artifact(c.prefix + "embeddings.csv");
          Args e{"--method", kind, "--regions", regions, "--features", features, "--joint", joint};
          if (!trained || (ci == 0 && kind == "hex2vec")) {
            if (kind != "gtfs2vec") e.insert(e.end(), {"--filter-json", *filter_json});
          }
          if (trained && ci == 0) {
            e.insert(e.end(), {"--fit", "--model-out", model});
            e.insert(e.end(), params.begin(), params.end());
            p.artifact("embedder.model.json");
          } else if (trained) {
            e.insert(e.end(), {"--model", model});
          } else {
            e.insert(e.end(), params.begin(), params.end());
          }
          e.insert(e.end(), {"--out", embeddings});
          if (!p.stage(c.prefix + "embed", cmd_embed, e)) { failed = true; break; }

          if (cluster) {
            Args a{"--embeddings", embeddings, "--out", p.artifact(c.prefix + "clusters.csv")};
            a.insert(a.end(), cluster->begin(), cluster->end());
            if (!p.stage(c.prefix + "cluster", cmd_cluster, a)) { failed = true; break; }
          }
          if (regression && ci == 0) {
            ridge_model = p.artifact("ridge.json");
            Args a{"--embeddings", embeddings, "--regions", regions, "--out", ridge_model};
            a.insert(a.end(), regression->begin(), regression->end());
            if (!p.stage("fit-reg", cmd_fit_reg, a)) { failed = true; break; }
          }
          if (regression && ci > 0) {
            Args a{"--model", ridge_model, "--embeddings", embeddings, "--out", p.artifact(c.prefix + "predictions.csv")};
            if (!p.stage(c.prefix + "predict", cmd_predict, a)) { failed = true; break; }
          }
        }
        if (!failed) {
          p.write_manifest();
          out << "manifest " << (fs::path(out_dir) / "manifest.json").string() << "\n";
        }
      });
  return rc == kExitOk && failed ? kExitData : rc;
}

}  // namespace geovec::cli
