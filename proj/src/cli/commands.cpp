#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_internal.hpp"
#include "geovec/analysis.hpp"
#include "geovec/cli.hpp"
#include "geovec/embedders.hpp"
#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"
#include "geovec/io/gazetteer.hpp"
#include "geovec/io/geojson.hpp"
#include "geovec/io/gtfs.hpp"
#include "geovec/io/osm_xml.hpp"
#include "geovec/join.hpp"
#include "geovec/neighbourhood.hpp"
#include "geovec/regions.hpp"

namespace geovec::cli {

using nlohmann::json;

int run_command(const std::string& name, const std::string& description, const Args& args,
                std::ostream& out, std::ostream& err, const std::function<void(CLI::App&)>& setup,
                const std::function<void()>& body) {
  CLI::App app{description, name};
  setup(app);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << name << ": " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  try {
    body();
    return kExitOk;
  } catch (const UsageError& e) {
    err << name << ": " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << name << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
    return kExitData;
  }
}

TagFilter parse_filter(std::string_view text) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::MalformedInput, "tag filter must be a JSON object of key -> [values]");
  }
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& [key, values] : doc.items()) {
    if (!values.is_array()) throw Error(ErrorKind::MalformedInput, "filter values for '" + key + "' must be an array");
    auto& list = entries[key];
    for (const auto& v : values) {
      if (!v.is_string()) throw Error(ErrorKind::MalformedInput, "filter values for '" + key + "' must be strings");
      list.push_back(v.get<std::string>());
    }
  }
  return TagFilter(std::move(entries));
}

namespace {

struct FilterOptions {
  std::string path;
  std::string inline_json;

  void add(CLI::App& app) {
    app.add_option("--filter", path, "Tag filter JSON file")->check(CLI::ExistingFile);
    app.add_option("--filter-json", inline_json, "Tag filter as inline JSON");
  }
  bool given() const { return !path.empty() || !inline_json.empty(); }
  TagFilter get() const {
    if (!path.empty() && !inline_json.empty()) throw UsageError("give --filter or --filter-json, not both");
    if (!given()) throw UsageError("a tag filter is required (--filter or --filter-json)");
    return parse_filter(path.empty() ? inline_json : io::read_file(path));
  }
};

MultiPolygon resolve_area(const std::string& area_path, const std::string& gazetteer,
                          const std::string& name) {
  if (!area_path.empty()) {
    if (!gazetteer.empty() || !name.empty()) throw UsageError("--area excludes --gazetteer/--name");
    return io::area_from_features(io::load_geojson(area_path));
  }
  if (gazetteer.empty() || name.empty()) {
    throw UsageError("an area is required: --area <geojson> or --gazetteer <file> --name <place>");
  }
  return io::Gazetteer::load(gazetteer).geocode(name);
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw UsageError("--sizes must be a comma list of positive integers");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) throw UsageError("--sizes must not be empty");
  return sizes;
}

NeighbourhoodGraph graph_for(const RegionSet& regions) {
  return regions.method() == RegionMethod::Hex ? hex_neighbourhood(regions)
                                               : adjacency_neighbourhood(regions);
}

std::string default_model_path(const std::string& out) {
  std::filesystem::path p(out);
  return (p.parent_path() / p.stem()).string() + ".model.json";
}

double parse_price(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw Error(ErrorKind::MalformedInput, where + ": target value '" + text + "' is not a number");
  }
  return v;
}

// Targets averaged per region, restricted to rows present in `x`.
std::pair<EmbeddingMatrix, std::vector<double>> align_targets(const EmbeddingMatrix& x,
                                                              const std::map<std::string, std::vector<double>>& per_region) {
  EmbeddingMatrix sub;
  sub.columns = x.columns;
  std::vector<std::size_t> rows;
  std::vector<double> y;
  for (const auto& [rid, values] : per_region) {
    const auto row = x.row_of(rid);
    if (!row) throw Error(ErrorKind::UnknownRegion, "target region '" + rid + "' has no embedding");
    double s = 0.0;
    for (const double v : values) s += v;
    rows.push_back(*row);
    sub.region_ids.push_back(rid);
    y.push_back(s / static_cast<double>(values.size()));
  }
  sub.values = nn::Matrix(rows.size(), x.values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = x.values.row(rows[i]);
    std::copy(src.begin(), src.end(), sub.values.row(i).begin());
  }
  return {std::move(sub), std::move(y)};
}

EmbeddingMatrix select_rows(const EmbeddingMatrix& x, const std::vector<double>& y,
                            const std::vector<std::string>& ids, std::vector<double>* y_out) {
  EmbeddingMatrix sub;
  sub.columns = x.columns;
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sub.values = nn::Matrix(sorted.size(), x.values.cols());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t r = *x.row_of(sorted[i]);
    sub.region_ids.push_back(sorted[i]);
    const auto src = x.values.row(r);
    std::copy(src.begin(), src.end(), sub.values.row(i).begin());
    y_out->push_back(y[r]);
  }
  return sub;
}

double rmse(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace

int cmd_regionalize(const Args& args, std::ostream& out, std::ostream& err) {
  std::string area, gazetteer, name, method, seeds, output;
  std::optional<int> resolution, zoom;
  return run_command(
      "regionalize", "Split an area into micro-regions", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--area", area, "Area GeoJSON")->check(CLI::ExistingFile);
        app.add_option("--gazetteer", gazetteer, "Gazetteer GeoJSON")->check(CLI::ExistingFile);
        app.add_option("--name", name, "Place name to look up in the gazetteer");
        app.add_option("--method", method, "hex | slippy | voronoi")
            ->required()
            ->check(CLI::IsMember({"hex", "slippy", "voronoi"}));
        app.add_option("--resolution", resolution, "Hex resolution");
        app.add_option("--zoom", zoom, "Tile zoom");
        app.add_option("--seeds", seeds, "Voronoi seed GeoJSON")->check(CLI::ExistingFile);
        app.add_option("--out", output, "Output regions GeoJSON")->required();
      },
      [&] {
        const RegionMethod m = *parse_region_method(method);
        if (m == RegionMethod::Hex && !resolution) throw UsageError("hex needs --resolution");
        if (m == RegionMethod::Slippy && !zoom) throw UsageError("slippy needs --zoom");
        if (m == RegionMethod::Voronoi && seeds.empty()) throw UsageError("voronoi needs --seeds");
        const MultiPolygon a = resolve_area(area, gazetteer, name);
        const RegionSet regions = m == RegionMethod::Hex      ? regionalize_hex(a, *resolution)
                                  : m == RegionMethod::Slippy ? regionalize_slippy(a, *zoom)
                                                              : regionalize_voronoi(a, io::load_geojson(seeds));
        write_region_set(regions, output);
        out << regions.size() << "\n";
      });
}

int cmd_load(const Args& args, std::ostream& out, std::ostream& err) {
  std::string kind, input, output;
  FilterOptions filter;
  return run_command(
      "load", "Load features from an offline source", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--kind", kind, "osm-xml | geojson | gtfs")
            ->required()
            ->check(CLI::IsMember({"osm-xml", "geojson", "gtfs"}));
        app.add_option("--input", input, "Source file")->required()->check(CLI::ExistingFile);
        filter.add(app);
        app.add_option("--out", output, "Output features GeoJSON")->required();
      },
      [&] {
        FeatureCollection features;
        if (kind == "osm-xml") {
          features = io::load_osm_xml(input, filter.get());
        } else if (kind == "geojson") {
          const FeatureCollection all = io::load_geojson(input);
          if (filter.given()) {
            const TagFilter f = filter.get();
            for (const auto& feature : all) {
              if (f.matches(feature.tags)) features.add(feature);
            }
          } else {
            features = all;
          }
        } else {
          if (filter.given()) throw UsageError("gtfs loading takes no tag filter");
          features = io::stops_to_features(io::load_gtfs(input));
        }
        io::write_geojson(features, output);
        out << features.size() << "\n";
      });
}

int cmd_join(const Args& args, std::ostream& out, std::ostream& err) {
  std::string regions_path, features_path, output;
  return run_command(
      "join", "Match features to regions", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--regions", regions_path, "Regions GeoJSON")->required()->check(CLI::ExistingFile);
        app.add_option("--features", features_path, "Features GeoJSON")->required()->check(CLI::ExistingFile);
        app.add_option("--out", output, "Output joint CSV")->required();
      },
      [&] {
        const JointIndex joint = intersection_join(load_region_set(regions_path), io::load_geojson(features_path));
        write_joint(joint, output);
        out << joint.size() << "\n";
      });
}

int cmd_embed(const Args& args, std::ostream& out, std::ostream& err) {
  std::string method, regions_path, features_path, joint_path, model_path, model_out, output, sizes;
  FilterOptions filter;
  bool fit = false;
  int k = 1;
  Hex2VecConfig hex;
  Gtfs2VecConfig gtfs;
  std::optional<int> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::uint64_t seed = 42;
  return run_command(
      "embed", "Compute region embeddings", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--method", method, "count | contextual | hex2vec | gtfs2vec")
            ->required()
            ->check(CLI::IsMember({"count", "contextual", "hex2vec", "gtfs2vec"}));
        app.add_option("--regions", regions_path, "Regions GeoJSON")->required()->check(CLI::ExistingFile);
        app.add_option("--features", features_path, "Features GeoJSON")->required()->check(CLI::ExistingFile);
        app.add_option("--joint", joint_path, "Joint CSV")->required()->check(CLI::ExistingFile);
        filter.add(app);
        app.add_flag("--fit", fit, "Train a new embedder");
        app.add_option("--model", model_path, "Pre-trained embedder (transform only)")->check(CLI::ExistingFile);
        app.add_option("--model-out", model_out, "Where --fit writes the model");
        app.add_option("--k", k, "Contextual ring radius");
        app.add_option("--sizes", sizes, "hex2vec encoder sizes, e.g. 42,13");
        app.add_option("--negatives", hex.negatives_per_positive, "hex2vec negatives per positive");
        app.add_option("--latent", gtfs.latent, "gtfs2vec latent size");
        app.add_option("--hidden", gtfs.hidden, "gtfs2vec hidden size");
        app.add_option("--epochs", epochs, "Training epochs");
        app.add_option("--batch-size", batch_size, "Minibatch size");
        app.add_option("--lr", lr, "Learning rate");
        app.add_option("--seed", seed, "Random seed");
        app.add_option("--out", output, "Output embeddings CSV")->required();
      },
      [&] {
        const bool trained = method == "hex2vec" || method == "gtfs2vec";
        if (trained && fit == !model_path.empty()) throw UsageError(method + " needs exactly one of --fit or --model");
        if (!trained && (fit || !model_path.empty())) throw UsageError(method + " has no model; drop --fit/--model");
        if (method != "contextual" && k != 1) throw UsageError("--k applies to contextual only");
        const RegionSet regions = load_region_set(regions_path);
        const FeatureCollection features = io::load_geojson(features_path);
        const JointIndex joint = load_joint(joint_path);
        const std::string model_file = model_out.empty() ? default_model_path(output) : model_out;

        EmbeddingMatrix result;
        if (method == "count") {
          result = count_embed(regions, features, joint, filter.get());
        } else if (method == "contextual") {
          if (k < 0) throw UsageError("--k must be >= 0");
          result = contextual_count_embed(regions, features, joint, filter.get(), graph_for(regions), k);
        } else if (method == "hex2vec") {
          if (fit) {
            if (!sizes.empty()) hex.sizes = parse_sizes(sizes);
            if (epochs) hex.epochs = *epochs;
            if (batch_size) hex.batch_size = *batch_size;
            if (lr) hex.lr = *lr;
            hex.seed = seed;
            const EmbeddingMatrix counts = count_embed(regions, features, joint, filter.get());
            const Hex2VecModel model = hex2vec_fit(regions, counts, graph_for(regions), hex);
            save_embedder(model, model_file);
            result = hex2vec_transform(model, counts);
          } else {
            if (filter.given()) throw UsageError("--model fixes the columns; drop the tag filter");
            const Hex2VecModel model = load_hex2vec(model_path);
            result = hex2vec_transform(model, count_embed(regions, features, joint, model.columns));
          }
        } else {
          if (filter.given()) throw UsageError("gtfs2vec takes no tag filter");
          const std::vector<io::GtfsStopFeatures> stops = io::stops_from_features(features);
          if (fit) {
            if (epochs) gtfs.epochs = *epochs;
            if (batch_size) gtfs.batch_size = *batch_size;
            if (lr) gtfs.lr = *lr;
            gtfs.seed = seed;
            const Gtfs2VecModel model = gtfs2vec_fit(regions, stops, joint, gtfs);
            save_embedder(model, model_file);
            result = gtfs2vec_transform(model, regions, stops, joint);
          } else {
            result = gtfs2vec_transform(load_gtfs2vec(model_path), regions, stops, joint);
          }
        }
        write_embeddings(result, output);
        out << result.values.rows() << "x" << result.values.cols() << "\n";
      });
}

int cmd_cluster(const Args& args, std::ostream& out, std::ostream& err) {
  std::string embeddings, output;
  int k = 5;
  int max_iter = 100;
  std::uint64_t seed = 42;
  return run_command(
      "cluster", "k-means over region embeddings", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--embeddings", embeddings, "Embeddings CSV")->required()->check(CLI::ExistingFile);
        app.add_option("--k", k, "Cluster count");
        app.add_option("--max-iter", max_iter, "Lloyd iteration cap");
        app.add_option("--seed", seed, "Random seed");
        app.add_option("--out", output, "Output cluster CSV")->required();
      },
      [&] {
        const ClusterAssignment a = kmeans(load_embeddings(embeddings), k, seed, max_iter);
        io::write_file(output, a.to_csv());
        out << "inertia " << io::format_double(a.inertia) << "\n";
      });
}

int cmd_fit_reg(const Args& args, std::ostream& out, std::ostream& err) {
  std::string embeddings, targets, targets_geojson, regions_path, target_column = "price", output;
  double lambda = kDefaultRidgeLambda;
  double test_fraction = kDefaultTestFraction;
  std::uint64_t seed = 42;
  return run_command(
      "fit-reg", "Fit a ridge regressor on region embeddings", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--embeddings", embeddings, "Embeddings CSV")->required()->check(CLI::ExistingFile);
        app.add_option("--targets", targets, "CSV region_id,<target>")->check(CLI::ExistingFile);
        app.add_option("--targets-geojson", targets_geojson, "Point targets joined to --regions")
            ->check(CLI::ExistingFile);
        app.add_option("--regions", regions_path, "Regions GeoJSON")->check(CLI::ExistingFile);
        app.add_option("--target-column", target_column, "Target column or property name");
        app.add_option("--lambda", lambda, "Ridge penalty");
        app.add_option("--test-fraction", test_fraction, "Held-out fraction; 0 trains on all");
        app.add_option("--seed", seed, "Split seed");
        app.add_option("--out", output, "Output ridge model JSON")->required();
      },
      [&] {
        if (targets.empty() == targets_geojson.empty()) throw UsageError("give exactly one of --targets or --targets-geojson");
        if (!targets_geojson.empty() && regions_path.empty()) throw UsageError("--targets-geojson needs --regions");
        if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw UsageError("--test-fraction must lie in [0, 1)");
        const EmbeddingMatrix x = load_embeddings(embeddings);
        std::map<std::string, std::vector<double>> per_region;
        if (!targets.empty()) {
          const io::CsvTable t = io::CsvTable::parse(io::read_file(targets));
          const auto id_col = t.column("region_id");
          const auto val_col = t.column(target_column);
          if (!id_col || !val_col) {
            throw Error(ErrorKind::MalformedInput, targets + ": needs columns region_id and " + target_column);
          }
          for (std::size_t r = 0; r < t.rows().size(); ++r) {
            per_region[std::string(t.field(r, *id_col))].push_back(
                parse_price(std::string(t.field(r, *val_col)), targets + " row " + std::to_string(r + 2)));
          }
        } else {
          const RegionSet regions = load_region_set(regions_path);
          const FeatureCollection points = io::load_geojson(targets_geojson);
          const JointIndex joint = intersection_join(regions, points);
          for (const auto& [rid, fid] : joint.pairs()) {
            const Feature* f = points.find(fid);
            const auto it = f->tags.find(target_column);
            if (it == f->tags.end()) continue;
            per_region[rid].push_back(parse_price(it->second, targets_geojson + " feature " + fid));
          }
        }
        auto [xs, y] = align_targets(x, per_region);
        if (xs.region_ids.empty()) throw Error(ErrorKind::TooFew, "no region has a target value");
        if (test_fraction == 0.0) {
          const RidgeModel m = ridge_fit(xs, y, lambda);
          save_ridge(m, output);
          out << "train_rmse " << io::format_double(rmse(ridge_predict(m, xs), y)) << "\n";
          return;
        }
        const auto [train_ids, test_ids] = train_test_split(xs.region_ids, test_fraction, seed);
        std::vector<double> y_train, y_test;
        const EmbeddingMatrix x_train = select_rows(xs, y, train_ids, &y_train);
        const EmbeddingMatrix x_test = select_rows(xs, y, test_ids, &y_test);
        const RidgeModel m = ridge_fit(x_train, y_train, lambda);
        save_ridge(m, output);
        out << "train_rmse " << io::format_double(rmse(ridge_predict(m, x_train), y_train)) << "\n"
            << "test_rmse " << io::format_double(rmse(ridge_predict(m, x_test), y_test)) << "\n";
      });
}

int cmd_predict(const Args& args, std::ostream& out, std::ostream& err) {
  std::string model, embeddings, output;
  return run_command(
      "predict", "Apply a ridge model to region embeddings", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--model", model, "Ridge model JSON")->required()->check(CLI::ExistingFile);
        app.add_option("--embeddings", embeddings, "Embeddings CSV")->required()->check(CLI::ExistingFile);
        app.add_option("--out", output, "Output predictions CSV")->required();
      },
      [&] {
        const RidgeModel m = load_ridge(model);
        const EmbeddingMatrix x = load_embeddings(embeddings);
        if (x.columns != m.columns && x.columns.size() == m.columns.size()) {
          throw Error(ErrorKind::ColumnMismatch, "embedding columns differ from the model's");
        }
        const std::vector<double> p = ridge_predict(m, x);
        io::write_file(output, predictions_to_csv(x.region_ids, p));
        out << p.size() << "\n";
      });
}

int cmd_validate_gtfs(const Args& args, std::ostream& out, std::ostream& err) {
  std::string input;
  bool problems = false;
  const int rc = run_command(
      "validate-gtfs", "Check a GTFS feed for structural defects", args, out, err,
      [&](CLI::App& app) {
        app.add_option("--input", input, "GTFS zip")->required()->check(CLI::ExistingFile);
      },
      [&] {
        const auto messages = io::validate_gtfs(input);
        for (const auto& m : messages) out << m.to_string() << "\n";
        problems = !messages.empty();
      });
  return rc == kExitOk && problems ? kExitData : rc;
}

int run(const Args& args, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, int (*)(const Args&, std::ostream&, std::ostream&)> commands = {
      {"regionalize", cmd_regionalize}, {"load", cmd_load},         {"join", cmd_join},
      {"embed", cmd_embed},             {"cluster", cmd_cluster},   {"fit-reg", cmd_fit_reg},
      {"predict", cmd_predict},         {"pipeline", cmd_pipeline}, {"validate-gtfs", cmd_validate_gtfs},
  };
  const auto usage = [&](std::ostream& os) {
    os << "usage: geovec <command> [options]\ncommands:";
    for (const auto& [name, fn] : commands) os << " " << name;
    os << "\nrun `geovec <command> --help` for the options of a command\n";
  };
  if (args.empty()) {
    usage(err);
    return kExitUsage;
  }
  if (args[0] == "--help" || args[0] == "-h") {
    usage(out);
    return kExitOk;
  }
  const auto it = commands.find(args[0]);
  if (it == commands.end()) {
    err << "unknown command '" << args[0] << "'\n";
    usage(err);
    return kExitUsage;
  }
  return it->second(Args(args.begin() + 1, args.end()), out, err);
}

}  // namespace geovec::cli
