#include "cli/commands.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cli/keyfile.hpp"
#include "onesweep/onesweep.hpp"

namespace onesweep::cli {

const std::vector<std::string> kBenchColumns = {
    "algo",          "key_type",       "n",
    "q",             "d",              "workers",
    "trial",         "wall_seconds",   "keys_per_second",
    "passes",        "histogram_reads", "element_reads",
    "element_writes", "element_ops",   "element_ops_per_n",
    "copy_ops",      "counter_ops",    "traffic_ratio",
    "fast_path_tiles", "status"};

std::optional<Algo> parse_algo(const std::string& name) {
  if (name == "onesweep") return Algo::Onesweep;
  if (name == "rts") return Algo::Rts;
  if (name == "oracle") return Algo::Oracle;
  return std::nullopt;
}

const char* algo_name(Algo algo) noexcept {
  switch (algo) {
    case Algo::Onesweep: return "onesweep";
    case Algo::Rts: return "rts";
    case Algo::Oracle: return "oracle";
  }
  return "?";
}

std::optional<KeyType> parse_key_type(unsigned bits,
                                      const std::string& family) {
  if (bits != 32 && bits != 64) return std::nullopt;
  const bool wide = bits == 64;
  if (family == "uint") return wide ? KeyType::U64 : KeyType::U32;
  if (family == "int") return wide ? KeyType::I64 : KeyType::I32;
  if (family == "float") return wide ? KeyType::F64 : KeyType::F32;
  return std::nullopt;
}

namespace {

template <class F>
int with_layout(const Layout& layout, F&& f) {
  return visit_key_type(layout.key_type, [&](auto key) {
    if (layout.value_bits == 64) return f(key, std::uint64_t{});
    return f(key, std::uint32_t{});
  });
}

template <class K>
std::string format_key(K key) {
  std::ostringstream os;
  if constexpr (std::is_floating_point_v<K>) {
    os << std::setprecision(std::numeric_limits<K>::max_digits10) << key
       << " (0x" << std::hex << std::bit_cast<EncodedKey<K>>(key) << ")";
  } else {
    os << key;
  }
  return os.str();
}

template <SortableKey K, class V>
void run_algo(Algo algo, std::span<K> keys, std::span<V> values,
              const RadixConfig& cfg, Executor& exec,
              SortWorkspace<K, V>& ws, SortStats* stats = nullptr) {
  switch (algo) {
    case Algo::Onesweep: {
      const auto s = onesweep_sort(keys, values, cfg, exec, ws);
      if (stats) *stats = s;
      break;
    }
    case Algo::Rts:
      rts_sort(keys, values, cfg, exec, ws);
      break;
    case Algo::Oracle:
      oracle_stable_sort(keys, values);
      break;
  }
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
  }
  return kDataError;
}

std::string csv_safe(std::string s) {
  std::replace_if(
      s.begin(), s.end(),
      [](char c) { return c == ',' || c == '"' || c == '\n' || c == '\r'; },
      ' ');
  return s;
}

template <class U, class K>
std::vector<K> bench_keys(const KeyGenSpec& spec) {
  std::vector<K> keys(spec.n);
  std::vector<U> raw(spec.n);
  generate_keys_into(spec, 0, std::span<U>(raw));
  for (std::size_t i = 0; i < spec.n; ++i) keys[i] = std::bit_cast<K>(raw[i]);
  return keys;
}

}  // namespace

int cmd_gen(const GenOptions& opts, std::ostream& err) {
  if (opts.bits != 32 && opts.bits != 64) {
    err << "usage error: --bits must be 32 or 64\n";
    return kUsageError;
  }
  if (opts.q == 0) {
    err << "usage error: --q must be at least 1\n";
    return kUsageError;
  }
  if (opts.values && opts.value_bits != 32 && opts.value_bits != 64) {
    err << "usage error: --value-bits must be 32 or 64\n";
    return kUsageError;
  }
  return guarded(err, [&] {
    const KeyGenSpec spec{opts.q, opts.seed, opts.n, opts.bits};
    auto emit = [&](const auto& keys) {
      using K = typename std::decay_t<decltype(keys)>::value_type;
      auto write_with = [&](auto value_tag) {
        using V = decltype(value_tag);
        std::vector<V> values;
        if (opts.values) {
          values.resize(keys.size());
          for (std::size_t i = 0; i < values.size(); ++i)
            values[i] = static_cast<V>(i);
        }
        write_records<K, V>(opts.out, keys, values);
      };
      if (opts.value_bits == 64)
        write_with(std::uint64_t{});
      else
        write_with(std::uint32_t{});
    };
    if (opts.bits == 32)
      emit(generate_keys32(spec));
    else
      emit(generate_keys64(spec));
    return static_cast<int>(kOk);
  });
}

int cmd_sort(const SortOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    return with_layout(opts.layout, [&](auto key, auto value) {
      using K = decltype(key);
      using V = decltype(value);
      const RadixConfig cfg = radix_plan(kKeyBits<K>, opts.digit_bits,
                                         opts.tile, opts.strip, opts.portion);
      auto rec = read_records<K, V>(opts.in, opts.layout.values);
      Executor exec(opts.workers == 0 ? Executor::default_workers()
                                      : opts.workers);
      SortWorkspace<K, V> ws;
      run_algo<K, V>(opts.algo, rec.keys, rec.values, cfg, exec, ws);
      write_records<K, V>(opts.out, rec.keys, rec.values);
      return static_cast<int>(kOk);
    });
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    return with_layout(opts.layout, [&](auto key, auto value) {
      using K = decltype(key);
      using V = decltype(value);
      auto expected = read_records<K, V>(opts.in, opts.layout.values);
      const auto actual = read_records<K, V>(opts.sorted, opts.layout.values);
      if (expected.keys.size() != actual.keys.size()) {
        err << "mismatch: " << opts.sorted << " holds " << actual.keys.size()
            << " records, " << opts.in << " holds " << expected.keys.size()
            << "\n";
        return static_cast<int>(kDataError);
      }
      oracle_stable_sort<K, V>(expected.keys, expected.values);
      for (std::size_t i = 0; i < expected.keys.size(); ++i) {
        const bool key_ok = encode_key(expected.keys[i]) ==
                            encode_key(actual.keys[i]);
        const bool value_ok =
            !opts.layout.values || expected.values[i] == actual.values[i];
        if (key_ok && value_ok) continue;
        err << "mismatch at index " << i << ": expected key "
            << format_key(expected.keys[i]);
        if (opts.layout.values) err << " value " << expected.values[i];
        err << ", actual key " << format_key(actual.keys[i]);
        if (opts.layout.values) err << " value " << actual.values[i];
        err << "\n";
        return static_cast<int>(kDataError);
      }
      out << "ok: " << expected.keys.size() << " records verified\n";
      return static_cast<int>(kOk);
    });
  });
}

std::vector<std::size_t> bench_sizes(const BenchOptions& opts) {
  std::vector<std::size_t> sizes;
  const unsigned lo = std::min(opts.min_log2, opts.max_log2);
  const unsigned hi = std::max(opts.min_log2, opts.max_log2);
  if (opts.samples == 0) {
    for (unsigned e = lo; e <= hi; ++e) sizes.push_back(std::size_t{1} << e);
    return sizes;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> exponent(lo, hi);
  for (unsigned i = 0; i < opts.samples; ++i)
    sizes.push_back(
        static_cast<std::size_t>(std::llround(std::exp2(exponent(rng)))));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.trials == 0) {
    err << "usage error: --trials must be at least 1\n";
    return kUsageError;
  }
  std::ofstream file;
  std::ostream* csv = &out;
  if (!opts.csv.empty()) {
    file.open(opts.csv, std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << opts.csv << " for writing\n";
      return kDataError;
    }
    csv = &file;
  }
  for (std::size_t c = 0; c < kBenchColumns.size(); ++c)
    *csv << (c ? "," : "") << kBenchColumns[c];
  *csv << "\n";

  Executor exec(opts.workers == 0 ? Executor::default_workers()
                                  : opts.workers);
  const auto sizes = bench_sizes(opts);

  visit_key_type(opts.key_type, [&](auto key) {
    using K = decltype(key);
    using V = std::uint32_t;
    using Raw = EncodedKey<K>;
    for (const unsigned d : opts.digit_bits) {
      for (const unsigned q : opts.qs) {
        for (const std::size_t n : sizes) {
          std::vector<K> input;
          std::vector<V> index;
          std::string setup_error;
          RadixConfig cfg;
          try {
            cfg = radix_plan(kKeyBits<K>, d, opts.tile);
            input = bench_keys<Raw, K>(
                KeyGenSpec{q, opts.seed + n, n, kKeyBits<K>});
            if (opts.values) {
              index.resize(n);
              for (std::size_t i = 0; i < n; ++i) index[i] = static_cast<V>(i);
            }
          } catch (const std::exception& e) {
            setup_error = e.what();
          }

          for (const Algo algo : opts.algos) {
            std::vector<K> keys(input.size());
            std::vector<V> values(index.size());
            SortWorkspace<K, V> ws;
            if (setup_error.empty())
              ws.prepare(n, opts.values, cfg, exec.workers());

            for (unsigned trial = 0; trial <= opts.trials; ++trial) {
              std::ostringstream row;
              row << algo_name(algo) << "," << key_type_name(opts.key_type)
                  << "," << n << "," << q << "," << d << "," << exec.workers()
                  << "," << trial << ",";
              try {
                if (!setup_error.empty()) throw std::runtime_error(setup_error);
                std::copy(input.begin(), input.end(), keys.begin());
                std::copy(index.begin(), index.end(), values.begin());
                exec.ledger_reset();
                SortStats stats;
                const auto t0 = std::chrono::steady_clock::now();
                run_algo<K, V>(algo, keys, values, cfg, exec, ws, &stats);
                const auto t1 = std::chrono::steady_clock::now();
                if (trial == 0) continue;  // warmup
                const double secs =
                    std::chrono::duration<double>(t1 - t0).count();
                const MemOpLedger ledger = exec.ledger_snapshot();
                const double nn = static_cast<double>(n);
                const double ideal = (2.0 * cfg.passes + 1.0) * nn;
                row << std::setprecision(9) << secs << ","
                    << (secs > 0 ? nn / secs : 0.0) << "," << cfg.passes
                    << "," << ledger[Phase::Histogram].element_reads << ","
                    << ledger.element_reads() << "," << ledger.element_writes()
                    << "," << ledger.element_ops() << ","
                    << (nn > 0 ? ledger.element_ops() / nn : 0.0) << ","
                    << ledger.copy_ops() << "," << ledger.counter_ops() << ","
                    << (ideal > 0 ? ledger.element_ops() / ideal : 0.0) << ","
                    << stats.fast_path_tiles << ",ok";
              } catch (const std::exception& e) {
                if (trial == 0) {
                  // Report the failure once, on the first counted trial.
                  setup_error = e.what();
                  continue;
                }
                row << ",,,,,,,,,,,,error: " << csv_safe(e.what());
              }
              *csv << row.str() << "\n";
            }
          }
        }
      }
    }
    return 0;
  });
  csv->flush();
  return kOk;
}

namespace {

std::vector<unsigned> parse_uint_list(const std::vector<std::string>& items,
                                      const char* flag) {
  std::vector<unsigned> out;
  for (const auto& item : items) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || item.empty())
      throw CLI::ValidationError(flag, "not an unsigned integer: " + item);
    out.push_back(static_cast<unsigned>(v));
  }
  return out;
}

void parse_log_range(const std::string& text, BenchOptions& opts) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--sizes", "expected LO:HI exponents, e.g. 12:24");
  const auto range = parse_uint_list(
      {text.substr(0, colon), text.substr(colon + 1)}, "--sizes");
  if (range[0] > 40 || range[1] > 40)
    throw CLI::ValidationError("--sizes", "exponents above 40 are not supported");
  opts.min_log2 = range[0];
  opts.max_log2 = range[1];
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-pass LSD radix sort toolkit"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an entropy-banded key file");
  gen_cmd->add_option("--n", gen.n, "Number of keys")->required();
  gen_cmd->add_option("--q", gen.q, "Words AND-ed per key (entropy band)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--bits", gen.bits, "Key width")->check(CLI::IsMember({32, 64}));
  gen_cmd->add_flag("--values", gen.values, "Append the record index as payload");
  gen_cmd->add_option("--value-bits", gen.value_bits, "Payload width")
      ->check(CLI::IsMember({32, 64}));
  gen_cmd->add_option("--out", gen.out, "Output path")->required();

  SortOptions sort;
  unsigned sort_bits = 32;
  std::string sort_family = "uint";
  std::string sort_algo = "onesweep";
  auto* sort_cmd = app.add_subcommand("sort", "Sort a key file");
  sort_cmd->add_option("--in", sort.in, "Input path")->required();
  sort_cmd->add_option("--out", sort.out, "Output path")->required();
  sort_cmd->add_option("--bits", sort_bits, "Key width")->check(CLI::IsMember({32, 64}));
  sort_cmd->add_option("--key-type", sort_family, "uint, int or float")
      ->check(CLI::IsMember({"uint", "int", "float"}));
  sort_cmd->add_option("--algo", sort_algo, "onesweep, rts or oracle")
      ->check(CLI::IsMember({"onesweep", "rts", "oracle"}));
  sort_cmd->add_option("--d", sort.digit_bits, "Bits per digit place");
  sort_cmd->add_option("--tile", sort.tile, "Elements per tile");
  sort_cmd->add_option("--strip", sort.strip, "Elements per strip");
  sort_cmd->add_option("--portion", sort.portion, "Histogram portion size");
  sort_cmd->add_option("--workers", sort.workers,
                       "Worker threads (default: ONESWEEP_WORKERS or all cores)");
  sort_cmd->add_flag("--values", sort.layout.values, "Records carry a payload");
  sort_cmd->add_option("--value-bits", sort.layout.value_bits, "Payload width")
      ->check(CLI::IsMember({32, 64}));

  VerifyOptions verify;
  unsigned verify_bits = 32;
  std::string verify_family = "uint";
  auto* verify_cmd =
      app.add_subcommand("verify", "Check a sorted file against the oracle");
  verify_cmd->add_option("--in", verify.in, "Unsorted input path")->required();
  verify_cmd->add_option("--sorted", verify.sorted, "Sorted output path")->required();
  verify_cmd->add_option("--bits", verify_bits, "Key width")
      ->check(CLI::IsMember({32, 64}));
  verify_cmd->add_option("--key-type", verify_family, "uint, int or float")
      ->check(CLI::IsMember({"uint", "int", "float"}));
  verify_cmd->add_flag("--values", verify.layout.values, "Records carry a payload");
  verify_cmd->add_option("--value-bits", verify.layout.value_bits, "Payload width")
      ->check(CLI::IsMember({32, 64}));

  BenchOptions bench;
  std::string sizes = "12:24";
  std::vector<std::string> q_list, d_list, algo_list;
  unsigned bench_bits = 32;
  std::string bench_family = "uint";
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep to CSV");
  bench_cmd->add_option("--sizes", sizes, "log2 size range LO:HI");
  bench_cmd->add_option("--samples", bench.samples,
                        "Log-uniform random sizes (0: every exponent)");
  bench_cmd->add_option("--q", q_list, "Entropy bands, comma separated")
      ->delimiter(',');
  bench_cmd->add_option("--d", d_list, "Digit widths, comma separated")
      ->delimiter(',');
  bench_cmd->add_option("--algos", algo_list, "Algorithms, comma separated")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Timed trials per row group");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads");
  bench_cmd->add_option("--bits", bench_bits, "Key width")->check(CLI::IsMember({32, 64}));
  bench_cmd->add_option("--key-type", bench_family, "uint, int or float")
      ->check(CLI::IsMember({"uint", "int", "float"}));
  bench_cmd->add_flag("--values", bench.values, "Sort 32-bit index payloads too");
  bench_cmd->add_option("--tile", bench.tile, "Elements per tile");
  bench_cmd->add_option("--seed", bench.seed, "Key generator seed");
  bench_cmd->add_option("--csv", bench.csv, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
    if (*bench_cmd) {
      parse_log_range(sizes, bench);
      if (!q_list.empty()) bench.qs = parse_uint_list(q_list, "--q");
      if (!d_list.empty()) bench.digit_bits = parse_uint_list(d_list, "--d");
      if (!algo_list.empty()) {
        bench.algos.clear();
        for (const auto& a : algo_list) {
          const auto algo = parse_algo(a);
          if (!algo) throw CLI::ValidationError("--algos", "unknown algorithm " + a);
          bench.algos.push_back(*algo);
        }
      }
      bench.key_type = *parse_key_type(bench_bits, bench_family);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kUsageError);
  }

  if (*gen_cmd) return cmd_gen(gen, err);
  if (*sort_cmd) {
    sort.layout.key_type = *parse_key_type(sort_bits, sort_family);
    sort.algo = *parse_algo(sort_algo);
    return cmd_sort(sort, err);
  }
  if (*verify_cmd) {
    verify.layout.key_type = *parse_key_type(verify_bits, verify_family);
    return cmd_verify(verify, out, err);
  }
  return cmd_bench(bench, out, err);
}

}  // namespace onesweep::cli
