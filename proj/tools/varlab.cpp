// Command-line driver: dataset generation, single-shot variance runs, the
// precision/timing sweeps, the cancellation inspector, t-test reports and
// probe-query emission. Every file it writes embeds the flags that produced
// it, so runs replay byte-for-byte.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varlab/varlab.hpp"

namespace {

constexpr std::string_view kVersion = "1.0.0";

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

using varlab::AlgorithmId;

std::uint64_t parse_count(const std::string& token) {
    // Accepts plain integers and scientific shorthand like 1e6.
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError("count", "not a number: " + token);
    }
    if (pos != token.size() || v < 0 || v > 9.007199254740992e15 || v != std::floor(v))
        throw CLI::ValidationError("count", "not a non-negative integer: " + token);
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    return out;
}

std::vector<std::uint64_t> parse_count_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const std::string& tok : split(s, ',')) out.push_back(parse_count(tok));
    if (out.empty()) throw CLI::ValidationError("list", "empty list");
    return out;
}

// "1..8" ranges and comma lists, e.g. "1..4,8,10".
std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const std::string& tok : split(s, ',')) {
        const auto dots = tok.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stoi(tok));
            } else {
                const int lo = std::stoi(tok.substr(0, dots));
                const int hi = std::stoi(tok.substr(dots + 2));
                if (hi < lo) throw CLI::ValidationError("range", "descending range: " + tok);
                for (int v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const CLI::ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw CLI::ValidationError("list", "not an integer: " + tok);
        }
    }
    if (out.empty()) throw CLI::ValidationError("list", "empty list");
    return out;
}

// Exponent lists additionally accept "none" for the unshifted dataset.
std::vector<std::optional<int>> parse_exponent_list(const std::string& s) {
    std::vector<std::optional<int>> out;
    for (const std::string& tok : split(s, ',')) {
        if (tok == "none") {
            out.push_back(std::nullopt);
        } else {
            for (int v : parse_int_list(tok)) out.push_back(v);
        }
    }
    if (out.empty()) throw CLI::ValidationError("exponents", "empty list");
    return out;
}

std::vector<AlgorithmId> parse_algorithms(const std::string& s) {
    if (s == "all")
        return {varlab::kAllAlgorithms.begin(), varlab::kAllAlgorithms.end()};
    std::vector<AlgorithmId> out;
    for (const std::string& tok : split(s, ',')) {
        const auto id = varlab::parse_algorithm(tok);
        if (!id) throw CLI::ValidationError("--algos", "unknown algorithm: " + tok);
        out.push_back(*id);
    }
    if (out.empty()) throw CLI::ValidationError("--algos", "empty algorithm list");
    return out;
}

varlab::ShiftPolicy parse_shift_policy(const std::string& s) {
    if (s == "first" || s == "first-element") return varlab::ShiftPolicy::first_element();
    if (s == "prefix-mean") return varlab::ShiftPolicy::prefix_mean();
    if (s.rfind("prefix-mean:", 0) == 0) {
        return varlab::ShiftPolicy::prefix_mean(parse_count(s.substr(12)));
    }
    if (s.rfind("explicit:", 0) == 0) {
        try {
            return varlab::ShiftPolicy::explicit_shift(std::stod(s.substr(9)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--shift-policy", "bad explicit shift: " + s);
        }
    }
    throw CLI::ValidationError("--shift-policy",
                               "expected first|prefix-mean[:K]|explicit:S, got " + s);
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_exponents(const std::vector<std::optional<int>>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i] ? std::to_string(*v[i]) : "none";
    }
    return out;
}

std::string join_algorithms(const std::vector<AlgorithmId>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += varlab::algorithm_name(v[i]);
    }
    return out;
}

std::string join_unsigned(const std::vector<unsigned>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

// Flags shared by every dataset-consuming subcommand.
struct InputFlags {
    std::string in_path;
    std::uint64_t size = 10000;
    std::uint64_t seed = varlab::kDefaultSeed;
    std::optional<int> shift_exp;

    void attach(CLI::App* cmd, bool with_file) {
        if (with_file)
            cmd->add_option("--in", in_path, "read values from a file instead of generating");
        cmd->add_option("--size", size, "number of points to generate")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "PRNG seed");
        cmd->add_option("--shift-exp", shift_exp, "additive shift 10^e applied to every point");
    }

    std::vector<double> load() const {
        if (!in_path.empty()) {
            if (in_path == "-") return varlab::read_dataset(std::cin);
            std::ifstream f(in_path);
            if (!f) throw varlab::IoError("cannot open " + in_path);
            return varlab::read_dataset(f);
        }
        return varlab::generate({size, shift_exp, seed});
    }
};

// Algorithm knobs shared by variance/sweep/bench/ttest.
struct OptionFlags {
    bool clamp = false;
    bool compensated = false;
    std::string shift_policy = "prefix-mean:1000";
    std::uint64_t group_size = 10;
    std::uint64_t base_block = varlab::kDefaultBaseBlock;
    std::string group_inner = "updating-wwh";

    void attach(CLI::App* cmd) {
        cmd->add_flag("--clamp,!--no-clamp", clamp,
                      "clamp a negative single-pass variance to zero (default off)");
        cmd->add_flag("--compensated", compensated, "Kahan-compensate the running sums");
        cmd->add_option("--shift-policy", shift_policy,
                        "shift choice for shifted: first|prefix-mean[:K]|explicit:S");
        cmd->add_option("--group-size", group_size, "points per group for total-variance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--base-block", base_block, "leaf size of the pairwise merge tree")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--group-inner", group_inner,
                        "group-level algorithm for total-variance");
    }

    varlab::RunOptions to_options() const {
        varlab::RunOptions opts;
        opts.clamp_negative = clamp;
        opts.compensated = compensated;
        opts.shift_policy = parse_shift_policy(shift_policy);
        opts.group_size = static_cast<std::size_t>(group_size);
        opts.base_block = static_cast<std::size_t>(base_block);
        const auto inner = varlab::parse_algorithm(group_inner);
        if (!inner) throw CLI::ValidationError("--group-inner", "unknown algorithm: " + group_inner);
        opts.group_inner = *inner;
        return opts;
    }

    // Canonical fragment for the embedded command line.
    std::string echo() const {
        std::string out;
        if (clamp) out += " --clamp";
        if (compensated) out += " --compensated";
        out += " --shift-policy " + shift_policy;
        out += " --group-size " + std::to_string(group_size);
        out += " --base-block " + std::to_string(base_block);
        out += " --group-inner " + group_inner;
        return out;
    }
};

std::vector<std::string> standard_metadata(const std::string& command) {
    return {
        std::string("varlab ") + std::string(kVersion),
        std::string("prng: ") + std::string(varlab::kPrngId),
        "command: " + command,
    };
}

// Writes through a stream chosen by --out ("-" = stdout).
void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw varlab::IoError("cannot open " + path + " for writing");
    fn(f);
    if (!f) throw varlab::IoError("write failed: " + path);
}

std::string fmt(double x) { return varlab::format_double17(x); }

// --- subcommands -----------------------------------------------------------

int cmd_gen(const InputFlags& in, const std::string& out_path) {
    const std::vector<double> data = varlab::generate({in.size, in.shift_exp, in.seed});
    std::string command = "varlab gen --size " + std::to_string(in.size) + " --seed " +
                          std::to_string(in.seed);
    if (in.shift_exp) command += " --shift-exp " + std::to_string(*in.shift_exp);
    const auto metadata = standard_metadata(command);
    with_output(out_path, [&](std::ostream& os) { varlab::write_dataset(os, metadata, data); });
    return 0;
}

int cmd_variance(const InputFlags& in, const OptionFlags& optf, const std::string& algo_name,
                 bool with_oracle) {
    const auto id = varlab::parse_algorithm(algo_name);
    if (!id) throw CLI::ValidationError("--algo", "unknown algorithm: " + algo_name);
    const std::vector<double> data = in.load();
    const varlab::RunOptions opts = optf.to_options();
    const varlab::VarianceResult r = varlab::run_algorithm(data, *id, opts);

    std::cout << "algorithm: " << varlab::algorithm_name(*id) << "\n";
    std::cout << "count: " << r.count << "\n";
    std::cout << "mean: " << fmt(r.mean) << "\n";
    std::cout << "variance: " << fmt(r.sample_variance) << "\n";
    if (r.sample_variance >= 0.0) {
        std::cout << "stddev: " << fmt(std::sqrt(r.sample_variance)) << "\n";
    } else {
        std::cout << "stddev: undefined\n";
        std::cerr << "warning: negative variance " << fmt(r.sample_variance)
                  << " -- catastrophic cancellation in the single-pass sums\n";
    }
    std::cout << "negative-clamped: " << (r.negative_clamped ? "yes" : "no") << "\n";
    if (with_oracle) {
        const varlab::ExactRational oracle = varlab::exact_variance(data);
        const varlab::DigitScore score = varlab::correct_digits(r.sample_variance, oracle);
        std::cout << "oracle-variance: " << oracle.to_decimal() << "\n";
        std::cout << "digits-vs-oracle: " << fmt(score.digits) << "\n";
    }
    return 0;
}

struct SweepFlags {
    std::string mode;
    std::uint64_t size = 10000;
    std::string sizes = "1e1,1e2,1e3,1e4,1e5,1e6,1e7";
    std::string exponents = "1..10";
    std::optional<int> shift_exp = 5;
    std::string group_sizes = "2,10,100,1000";
    std::string algos = "all";
    std::uint64_t seed = varlab::kDefaultSeed;
    unsigned reps = 10;
};

int cmd_sweep(const SweepFlags& sw, const OptionFlags& optf, const std::string& out_path) {
    const varlab::RunOptions opts = optf.to_options();
    const std::vector<AlgorithmId> algorithms = parse_algorithms(sw.algos);
    std::vector<varlab::PrecisionRecord> records;
    std::string command = "varlab sweep --mode " + sw.mode;

    if (sw.mode == "shift") {
        const auto exponents = parse_exponent_list(sw.exponents);
        records = varlab::shift_sweep(sw.size, exponents, algorithms, sw.seed, sw.reps, opts);
        command += " --size " + std::to_string(sw.size) + " --exponents " +
                   join_exponents(exponents);
    } else if (sw.mode == "size") {
        const auto sizes = parse_count_list(sw.sizes);
        records = varlab::size_sweep(sizes, sw.shift_exp, algorithms, sw.seed, sw.reps, opts);
        command += " --sizes " + join_u64(sizes) +
                   (sw.shift_exp ? " --shift-exp " + std::to_string(*sw.shift_exp) : "");
    } else if (sw.mode == "group") {
        const auto group_sizes = parse_count_list(sw.group_sizes);
        records = varlab::group_size_sweep(sw.size, sw.shift_exp, group_sizes, sw.seed, sw.reps,
                                           opts);
        command += " --size " + std::to_string(sw.size) +
                   (sw.shift_exp ? " --shift-exp " + std::to_string(*sw.shift_exp) : "") +
                   " --group-sizes " + join_u64(group_sizes);
    } else {
        throw CLI::ValidationError("--mode", "expected shift, size or group");
    }
    command += " --algos " + join_algorithms(algorithms) + " --seed " + std::to_string(sw.seed) +
               " --reps " + std::to_string(sw.reps) + optf.echo();

    const auto metadata = standard_metadata(command);
    with_output(out_path,
                [&](std::ostream& os) { varlab::write_precision_csv(os, metadata, records); });

    if (out_path != "-") {
        // Seed-averaged view on stdout; the per-seed rows are in the CSV.
        std::cout << "algorithm        size  shift  group  mean-digits  (over "
                  << sw.reps << " seeds)\n";
        for (const varlab::DigitSummary& c : varlab::summarize_digits(records)) {
            std::printf("%-15s %6llu  %5s  %5s  %11.3f\n", c.algorithm.c_str(),
                        static_cast<unsigned long long>(c.size),
                        c.shift_exponent ? std::to_string(*c.shift_exponent).c_str() : "none",
                        c.group_size ? std::to_string(*c.group_size).c_str() : "-",
                        c.mean_digits);
        }
    }
    return 0;
}

struct BenchFlags {
    std::string sizes = "1e6";
    std::string algos = "all";
    std::string threads;
    unsigned reps = 10;
    std::uint64_t seed = varlab::kDefaultSeed;
};

int cmd_bench(const BenchFlags& bf, const OptionFlags& optf, const std::string& out_path) {
    const varlab::RunOptions opts = optf.to_options();
    const auto sizes = parse_count_list(bf.sizes);
    const auto algorithms = parse_algorithms(bf.algos);
    std::string threads_str = bf.threads;
    if (threads_str.empty()) {
        const char* env = std::getenv("VARLAB_THREADS");
        threads_str = env && *env ? env : "1";
    }
    std::vector<unsigned> threads;
    for (int t : parse_int_list(threads_str)) {
        if (t < 1) throw CLI::ValidationError("--threads", "thread counts must be >= 1");
        threads.push_back(static_cast<unsigned>(t));
    }

    const bool any_parallel_algo =
        std::any_of(algorithms.begin(), algorithms.end(), varlab::parallelizable);
    const bool any_single_thread = std::any_of(threads.begin(), threads.end(),
                                               [](unsigned t) { return t == 1; });
    if (!any_parallel_algo && !any_single_thread)
        throw varlab::UnsupportedParallelAlgorithmError(bf.algos);
    for (AlgorithmId id : algorithms)
        if (!varlab::parallelizable(id) && !any_single_thread)
            std::cerr << "note: " << varlab::algorithm_name(id)
                      << " cannot run multi-threaded; timing it single-threaded\n";

    const auto records = varlab::timing_sweep(sizes, algorithms, threads, bf.reps, bf.seed, opts);
    const std::string command = "varlab bench --sizes " + join_u64(sizes) + " --algos " +
                                join_algorithms(algorithms) + " --threads " +
                                join_unsigned(threads) + " --reps " + std::to_string(bf.reps) +
                                " --seed " + std::to_string(bf.seed) + optf.echo();
    const auto metadata = standard_metadata(command);
    with_output(out_path,
                [&](std::ostream& os) { varlab::write_timing_csv(os, metadata, records); });
    return 0;
}

int cmd_mantissa(const InputFlags& in, const std::string& shifts, const std::string& out_path) {
    const std::vector<double> data = in.load();
    const std::vector<int> exponents = parse_int_list(shifts);
    const auto rows = varlab::mantissa_table(data, exponents);

    if (out_path == "-") {
        std::printf("%-6s %-17s %-17s %24s %24s\n", "shift", "mantissa(S1)", "mantissa(S2)", "S",
                    "variance");
        for (const varlab::MantissaRow& r : rows) {
            std::printf("%-6s %-17s %-17s %24s %24s\n",
                        r.shift_exponent ? std::to_string(*r.shift_exponent).c_str() : "none",
                        r.s1_mantissa.c_str(), r.s2_mantissa.c_str(), fmt(r.s).c_str(),
                        fmt(r.variance).c_str());
        }
        return 0;
    }
    std::string command = "varlab mantissa --size " + std::to_string(in.size) + " --seed " +
                          std::to_string(in.seed);
    if (in.shift_exp) command += " --shift-exp " + std::to_string(*in.shift_exp);
    command += " --shifts ";
    for (std::size_t i = 0; i < exponents.size(); ++i)
        command += (i ? "," : "") + std::to_string(exponents[i]);
    const auto metadata = standard_metadata(command);
    with_output(out_path,
                [&](std::ostream& os) { varlab::write_mantissa_csv(os, metadata, rows); });
    return 0;
}

int cmd_ttest(const InputFlags& in, const OptionFlags& optf, const std::string& algo_name,
              double mu0, double alpha) {
    const auto id = varlab::parse_algorithm(algo_name);
    if (!id) throw CLI::ValidationError("--algo", "unknown algorithm: " + algo_name);
    const std::vector<double> data = in.load();
    const varlab::VarianceResult r = varlab::run_algorithm(data, *id, optf.to_options());
    const varlab::SummaryStats stats = varlab::summarize(r);
    const varlab::TTestResult t = varlab::one_sample_ttest(stats, mu0, alpha);

    std::cout << "algorithm: " << varlab::algorithm_name(*id) << "\n";
    std::cout << "n: " << stats.n << "\n";
    std::cout << "mean: " << fmt(stats.mean) << "\n";
    std::cout << "variance: " << fmt(stats.variance) << "\n";
    std::cout << "stddev: " << fmt(stats.stddev) << "\n";
    std::cout << "stderr: " << fmt(stats.std_error) << "\n";
    std::cout << "mu0: " << fmt(mu0) << "\n";
    std::cout << "critical-value (alpha=" << alpha << ", df=" << stats.n - 1
              << "): " << fmt(t.critical_value) << "\n";
    if (t.failure_mode == varlab::TTestFailure::LoudZeroStddev) {
        std::cout << "t-statistic: undefined\n";
        std::cout << "LOUD FAILURE: zero standard deviation with mean != mu0; "
                     "the t-test reports an error\n";
    } else {
        std::cout << "t-statistic: " << fmt(t.t_statistic) << "\n";
    }
    std::cout << "acceptance-interval: [" << fmt(t.acceptance_interval.first) << ", "
              << fmt(t.acceptance_interval.second) << "]\n";
    std::cout << "interval-width: "
              << fmt(t.acceptance_interval.second - t.acceptance_interval.first) << "\n";
    std::cout << "decision: " << (t.reject ? "REJECT" : "FAIL-TO-REJECT") << "\n";
    return 0;
}

int cmd_probe_sql(const std::string& table, const std::string& column, const std::string& shifts,
                  double alpha, std::uint64_t count) {
    const std::vector<int> exponents = parse_int_list(shifts);
    if (count < 2) throw CLI::ValidationError("--count", "need a count of at least 2");
    const double critical = varlab::t_quantile(alpha, static_cast<std::int64_t>(count) - 1);
    std::cout << "-- confidence half-width probes: one query per additive shift 10^e\n";
    std::cout << "-- alpha=" << alpha << " count=" << count << " critical=" << fmt(critical)
              << "\n";
    for (int e : exponents) {
        std::cout << "SELECT " << fmt(critical) << " * stddev(" << column << " + 1e" << e
                  << ") / sqrt(count(" << column << ")) FROM " << table << ";\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variance representations under one roof: accumulators, exact oracle, "
                 "precision and timing experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // gen
    auto* gen = app.add_subcommand("gen", "generate a dataset file");
    InputFlags gen_in;
    gen_in.attach(gen, false);
    gen->get_option("--size")->required();
    std::string gen_out = "-";
    gen->add_option("--out", gen_out, "output path ('-' = stdout)");

    // variance
    auto* variance = app.add_subcommand("variance", "run one algorithm over one dataset");
    InputFlags var_in;
    var_in.attach(variance, true);
    OptionFlags var_opts;
    var_opts.attach(variance);
    std::string var_algo;
    variance->add_option("--algo", var_algo, "algorithm id")->required();
    bool var_oracle = false;
    variance->add_flag("--oracle", var_oracle, "also score against the exact-rational oracle");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "precision sweeps producing CSV");
    SweepFlags sweep_flags;
    sweep->add_option("--mode", sweep_flags.mode, "shift | size | group")->required();
    sweep->add_option("--size", sweep_flags.size, "dataset size (shift/group modes)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--sizes", sweep_flags.sizes, "dataset sizes (size mode)");
    sweep->add_option("--exponents", sweep_flags.exponents,
                      "shift exponents (shift mode), e.g. 1..10 or none,2,4");
    sweep->add_option("--shift-exp", sweep_flags.shift_exp, "shift exponent (size/group modes)");
    sweep->add_option("--group-sizes", sweep_flags.group_sizes, "group sizes (group mode)");
    sweep->add_option("--algos", sweep_flags.algos, "comma list of algorithm ids, or 'all'");
    sweep->add_option("--seed", sweep_flags.seed, "base seed; repetition r uses seed+r");
    sweep->add_option("--reps", sweep_flags.reps, "seeds per cell")->check(CLI::PositiveNumber);
    OptionFlags sweep_opts;
    sweep_opts.attach(sweep);
    std::string sweep_out = "-";
    sweep->add_option("--out", sweep_out, "CSV path ('-' = stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "wall-clock timing producing CSV");
    BenchFlags bench_flags;
    bench->add_option("--sizes", bench_flags.sizes, "dataset sizes");
    bench->add_option("--algos", bench_flags.algos, "algorithms to time");
    bench->add_option("--threads", bench_flags.threads,
                      "thread counts (default $VARLAB_THREADS or 1)");
    bench->add_option("--reps", bench_flags.reps, "measured repetitions per cell")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_flags.seed, "dataset seed");
    OptionFlags bench_opts;
    bench_opts.attach(bench);
    std::string bench_out = "-";
    bench->add_option("--out", bench_out, "CSV path ('-' = stdout)");

    // mantissa
    auto* mantissa = app.add_subcommand(
        "mantissa", "fraction bits of the two cancelling single-pass terms");
    InputFlags man_in;
    man_in.attach(mantissa, true);
    std::string man_shifts = "1..8";
    mantissa->add_option("--shifts", man_shifts, "shift exponents, e.g. 1..8");
    std::string man_out = "-";
    mantissa->add_option("--out", man_out, "CSV path ('-' = stdout table)");

    // ttest
    auto* ttest = app.add_subcommand("ttest", "one-sample two-tailed t-test report");
    InputFlags tt_in;
    tt_in.attach(ttest, true);
    OptionFlags tt_opts;
    tt_opts.attach(ttest);
    std::string tt_algo = "two-pass";
    ttest->add_option("--algo", tt_algo, "variance algorithm backing the test");
    double tt_mu0 = 0.0;
    ttest->add_option("--mu0", tt_mu0, "hypothesized mean")->required();
    double tt_alpha = 0.05;
    ttest->add_option("--alpha", tt_alpha, "significance level")
        ->check(CLI::Range(1e-12, 1.0));

    // probe-sql
    auto* probe = app.add_subcommand("probe-sql",
                                     "emit shift-probe SQL (no database connection)");
    std::string pr_table;
    std::string pr_column;
    probe->add_option("--table", pr_table, "table name, interpolated verbatim")->required();
    probe->add_option("--column", pr_column, "column name, interpolated verbatim")->required();
    std::string pr_shifts = "1..15";
    probe->add_option("--exponents", pr_shifts, "shift exponents");
    double pr_alpha = 0.05;
    probe->add_option("--alpha", pr_alpha, "significance level")->check(CLI::Range(1e-12, 1.0));
    std::uint64_t pr_count = 100;
    probe->add_option("--count", pr_count, "row count used for the critical value");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : kExitUsage;
        }
        // Post-parse validation (list/algorithm parsing) reports as usage too.
        if (gen->parsed()) return cmd_gen(gen_in, gen_out);
        if (variance->parsed()) return cmd_variance(var_in, var_opts, var_algo, var_oracle);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_opts, sweep_out);
        if (bench->parsed()) return cmd_bench(bench_flags, bench_opts, bench_out);
        if (mantissa->parsed()) return cmd_mantissa(man_in, man_shifts, man_out);
        if (ttest->parsed()) return cmd_ttest(tt_in, tt_opts, tt_algo, tt_mu0, tt_alpha);
        if (probe->parsed()) return cmd_probe_sql(pr_table, pr_column, pr_shifts, pr_alpha,
                                                  pr_count);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const varlab::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const varlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
