#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geovec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

using Args = std::vector<std::string>;

// `args` excludes the program name; args[0] is the subcommand.
int run(const Args& args, std::ostream& out, std::ostream& err);

// Each subcommand takes its own flags (no subcommand name).
int cmd_regionalize(const Args& args, std::ostream& out, std::ostream& err);
int cmd_load(const Args& args, std::ostream& out, std::ostream& err);
int cmd_join(const Args& args, std::ostream& out, std::ostream& err);
int cmd_embed(const Args& args, std::ostream& out, std::ostream& err);
int cmd_cluster(const Args& args, std::ostream& out, std::ostream& err);
int cmd_fit_reg(const Args& args, std::ostream& out, std::ostream& err);
int cmd_predict(const Args& args, std::ostream& out, std::ostream& err);
int cmd_validate_gtfs(const Args& args, std::ostream& out, std::ostream& err);
// --config <json> --out-dir <dir>; writes every artifact plus manifest.json.
int cmd_pipeline(const Args& args, std::ostream& out, std::ostream& err);

}  // namespace geovec::cli
