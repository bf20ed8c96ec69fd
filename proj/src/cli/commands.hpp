#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "onesweep/keycodec.hpp"

namespace onesweep::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

enum class Algo { Onesweep, Rts, Oracle };

std::optional<Algo> parse_algo(const std::string& name);
const char* algo_name(Algo algo) noexcept;

/// Combines a width (32/64) and a family (uint/int/float).
std::optional<KeyType> parse_key_type(unsigned bits, const std::string& family);

struct Layout {
  KeyType key_type = KeyType::U32;
  bool values = false;
  unsigned value_bits = 32;
};

struct GenOptions {
  std::size_t n = 0;
  unsigned q = 1;
  std::uint64_t seed = 0;
  unsigned bits = 32;
  bool values = false;  // payload = record index
  unsigned value_bits = 32;
  std::string out;
};

struct SortOptions {
  std::string in;
  std::string out;
  Layout layout;
  Algo algo = Algo::Onesweep;
  unsigned digit_bits = kDefaultDigitBits;
  std::size_t tile = kDefaultTileSize;
  std::size_t strip = kMaxStripSize;
  std::size_t portion = kMaxPortionSize;
  unsigned workers = 0;  // 0: executor default
};

struct VerifyOptions {
  std::string in;
  std::string sorted;
  Layout layout;
};

struct BenchOptions {
  unsigned min_log2 = 12;
  unsigned max_log2 = 24;
  unsigned samples = 0;  // 0: every integer exponent in range
  std::vector<unsigned> qs{1};
  std::vector<unsigned> digit_bits{8};
  std::vector<Algo> algos{Algo::Onesweep, Algo::Rts};
  unsigned trials = 3;
  unsigned workers = 0;
  KeyType key_type = KeyType::U32;
  bool values = false;
  std::size_t tile = kDefaultTileSize;
  std::uint64_t seed = 1;
  std::string csv;  // empty: stdout
};

/// Column order of the bench CSV.
extern const std::vector<std::string> kBenchColumns;

int cmd_gen(const GenOptions& opts, std::ostream& err);
int cmd_sort(const SortOptions& opts, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

/// Problem sizes for a bench run: either every 2^e in range, or `samples`
/// sizes drawn log-uniformly (deterministic in seed), ascending.
std::vector<std::size_t> bench_sizes(const BenchOptions& opts);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace onesweep::cli
