#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "geovec/cli.hpp"
#include "geovec/features.hpp"

namespace geovec::cli {

// Bad flag combinations found after parsing; exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int run_command(const std::string& name, const std::string& description, const Args& args,
                std::ostream& out, std::ostream& err, const std::function<void(CLI::App&)>& setup,
                const std::function<void()>& body);

TagFilter parse_filter(std::string_view text);

}  // namespace geovec::cli
