#include <algorithm>
#include <cmath>

#include "geovec/analysis.hpp"
#include "geovec/error.hpp"

namespace geovec {

std::pair<std::vector<std::string>, std::vector<std::string>> train_test_split(
    const std::vector<std::string>& ids, double test_fraction, std::uint64_t seed) {
  if (ids.size() < 2) throw Error(ErrorKind::TooFew, "split needs at least 2 ids");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::MalformedInput, "test fraction must lie in (0, 1)");
  }
  std::vector<std::string> order = ids;
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(order));
  const auto n = static_cast<long>(order.size());
  const long test = std::clamp(std::lround(test_fraction * static_cast<double>(n)), 1L, n - 1);
  std::vector<std::string> train(order.begin(), order.end() - test);
  std::vector<std::string> held(order.end() - test, order.end());
  return {std::move(train), std::move(held)};
}

}  // namespace geovec
