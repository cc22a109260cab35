#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "varlab/algorithms.hpp"
#include "varlab/csv.hpp"
#include "varlab/dataset.hpp"
#include "varlab/digits.hpp"
#include "varlab/exact.hpp"
#include "varlab/mantissa.hpp"
#include "varlab/parallel.hpp"

namespace varlab {

// One experiment row: which algorithm saw which dataset, what it computed,
// the oracle value (30 significant digits) and the digit score against it.
struct PrecisionRecord {
    std::string algorithm;
    DatasetSpec spec;
    std::optional<std::uint64_t> group_size;
    double computed_variance = 0.0;
    std::string oracle_variance;
    double digits = 0.0;
};

struct TimingRecord {
    std::string algorithm;
    std::uint64_t size = 0;
    unsigned threads = 1;
    unsigned repetitions = 1;
    double mean_wall_seconds = 0.0;
    double stddev_wall_seconds = 0.0;
};

// Digit scores averaged over the seeds of one sweep cell.
struct DigitSummary {
    std::string algorithm;
    std::uint64_t size = 0;
    std::optional<int> shift_exponent;
    std::optional<std::uint64_t> group_size;
    double mean_digits = 0.0;
    unsigned seeds = 0;
};

namespace detail {

inline PrecisionRecord make_precision_record(AlgorithmId id, const DatasetSpec& spec,
                                             std::optional<std::uint64_t> group_size,
                                             const VarianceResult& result,
                                             const ExactRational& oracle,
                                             const std::string& oracle_str) {
    PrecisionRecord rec;
    rec.algorithm = algorithm_name(id);
    rec.spec = spec;
    rec.group_size = group_size;
    rec.computed_variance = result.sample_variance;
    rec.oracle_variance = oracle_str;
    rec.digits = correct_digits(result.sample_variance, oracle).digits;
    return rec;
}

} // namespace detail

// Precision vs additive shift at a fixed size. Repetition r uses seed
// seed + r; per-seed rows are all retained (see summarize_digits for the
// averaged view).
inline std::vector<PrecisionRecord> shift_sweep(std::uint64_t size,
                                                std::span<const std::optional<int>> exponents,
                                                std::span<const AlgorithmId> algorithms,
                                                std::uint64_t seed, unsigned repetitions,
                                                const RunOptions& opts = {}) {
    if (size < 2) throw InsufficientDataError{};
    std::vector<PrecisionRecord> records;
    records.reserve(repetitions * exponents.size() * algorithms.size());
    for (unsigned rep = 0; rep < repetitions; ++rep) {
        for (const std::optional<int>& e : exponents) {
            const DatasetSpec spec{size, e, seed + rep};
            const std::vector<double> data = generate(spec);
            const ExactRational oracle = exact_variance(data);
            const std::string oracle_str = oracle.to_decimal();
            for (AlgorithmId id : algorithms) {
                const VarianceResult r = run_algorithm(data, id, opts);
                const auto group = id == AlgorithmId::TotalVariance
                                       ? std::optional<std::uint64_t>(opts.group_size)
                                       : std::nullopt;
                records.push_back(
                    detail::make_precision_record(id, spec, group, r, oracle, oracle_str));
            }
        }
    }
    return records;
}

// Precision vs data size at a fixed shift.
inline std::vector<PrecisionRecord> size_sweep(std::span<const std::uint64_t> sizes,
                                               std::optional<int> shift_exponent,
                                               std::span<const AlgorithmId> algorithms,
                                               std::uint64_t seed, unsigned repetitions,
                                               const RunOptions& opts = {}) {
    std::vector<PrecisionRecord> records;
    records.reserve(repetitions * sizes.size() * algorithms.size());
    for (unsigned rep = 0; rep < repetitions; ++rep) {
        for (std::uint64_t size : sizes) {
            if (size < 2) throw InsufficientDataError{};
            const DatasetSpec spec{size, shift_exponent, seed + rep};
            const std::vector<double> data = generate(spec);
            const ExactRational oracle = exact_variance(data);
            const std::string oracle_str = oracle.to_decimal();
            for (AlgorithmId id : algorithms) {
                const VarianceResult r = run_algorithm(data, id, opts);
                const auto group = id == AlgorithmId::TotalVariance
                                       ? std::optional<std::uint64_t>(opts.group_size)
                                       : std::nullopt;
                records.push_back(
                    detail::make_precision_record(id, spec, group, r, oracle, oracle_str));
            }
        }
    }
    return records;
}

// Total-variance precision vs group size. The last group of a partition may
// be shorter than the nominal size.
inline std::vector<PrecisionRecord> group_size_sweep(std::uint64_t size,
                                                     std::optional<int> shift_exponent,
                                                     std::span<const std::uint64_t> group_sizes,
                                                     std::uint64_t seed, unsigned repetitions,
                                                     const RunOptions& opts = {}) {
    if (size < 2) throw InsufficientDataError{};
    for (std::uint64_t g : group_sizes)
        if (g == 0 || g > size) throw DomainError("group size must be in [1, size]");
    std::vector<PrecisionRecord> records;
    records.reserve(repetitions * group_sizes.size());
    for (unsigned rep = 0; rep < repetitions; ++rep) {
        const DatasetSpec spec{size, shift_exponent, seed + rep};
        const std::vector<double> data = generate(spec);
        const ExactRational oracle = exact_variance(data);
        const std::string oracle_str = oracle.to_decimal();
        for (std::uint64_t g : group_sizes) {
            RunOptions cell = opts;
            cell.group_size = static_cast<std::size_t>(g);
            const VarianceResult r = run_algorithm(data, AlgorithmId::TotalVariance, cell);
            records.push_back(detail::make_precision_record(AlgorithmId::TotalVariance, spec, g,
                                                            r, oracle, oracle_str));
        }
    }
    return records;
}

namespace detail {

inline volatile double timing_sink = 0.0;

} // namespace detail

// Wall-clock timing per (algorithm, size, threads) cell. Datasets are
// generated and resident before any timer starts. Algorithms that cannot
// merge partial states run single-threaded regardless of the requested
// thread counts and are recorded as such, once per size.
inline std::vector<TimingRecord> timing_sweep(std::span<const std::uint64_t> sizes,
                                              std::span<const AlgorithmId> algorithms,
                                              std::span<const unsigned> thread_counts,
                                              unsigned repetitions, std::uint64_t seed,
                                              const RunOptions& opts = {}) {
    if (repetitions == 0) throw DomainError("repetitions must be positive");
    using clock = std::chrono::steady_clock;
    std::vector<TimingRecord> records;
    for (std::uint64_t size : sizes) {
        const std::vector<double> data = generate({size, std::nullopt, seed});
        for (AlgorithmId id : algorithms) {
            bool sequential_done = false;
            for (unsigned threads : thread_counts) {
                const unsigned effective = parallelizable(id) ? threads : 1;
                if (effective == 1 && sequential_done) continue;
                const ChunkPlan plan =
                    effective > 1 ? plan_chunks(data.size(), effective) : ChunkPlan{};
                std::vector<double> elapsed(repetitions);
                for (unsigned rep = 0; rep < repetitions; ++rep) {
                    const auto start = clock::now();
                    const VarianceResult r = effective > 1
                                                 ? parallel_variance(data, id, plan, opts)
                                                 : run_algorithm(data, id, opts);
                    const auto stop = clock::now();
                    detail::timing_sink = r.sample_variance;
                    elapsed[rep] = std::chrono::duration<double>(stop - start).count();
                }
                double mean = 0.0;
                for (double t : elapsed) mean += t;
                mean /= repetitions;
                double stddev = 0.0;
                if (repetitions > 1) {
                    for (double t : elapsed) stddev += (t - mean) * (t - mean);
                    stddev = std::sqrt(stddev / (repetitions - 1));
                }
                records.push_back({std::string(algorithm_name(id)), size, effective, repetitions,
                                   mean, stddev});
                if (effective == 1) sequential_done = true;
            }
        }
    }
    return records;
}

// Arithmetic mean of the digit scores per sweep cell, in first-seen order.
inline std::vector<DigitSummary> summarize_digits(std::span<const PrecisionRecord> records) {
    std::vector<DigitSummary> cells;
    for (const PrecisionRecord& rec : records) {
        DigitSummary* cell = nullptr;
        for (DigitSummary& c : cells) {
            if (c.algorithm == rec.algorithm && c.size == rec.spec.size &&
                c.shift_exponent == rec.spec.shift_exponent && c.group_size == rec.group_size) {
                cell = &c;
                break;
            }
        }
        if (!cell) {
            cells.push_back({rec.algorithm, rec.spec.size, rec.spec.shift_exponent,
                             rec.group_size, 0.0, 0});
            cell = &cells.back();
        }
        cell->mean_digits += rec.digits;
        cell->seeds += 1;
    }
    for (DigitSummary& c : cells) c.mean_digits /= c.seeds;
    return cells;
}

// --- CSV emission ---------------------------------------------------------

inline constexpr std::string_view kDistributionName = "uniform01";

inline void write_precision_csv(std::ostream& os, std::span<const std::string> metadata,
                                std::span<const PrecisionRecord> records) {
    CsvWriter csv(os);
    for (const std::string& line : metadata) csv.comment(line);
    static constexpr std::string_view columns[] = {
        "algorithm", "size",             "shift_exponent", "seed",  "distribution",
        "group_size", "computed_variance", "oracle_variance", "digits"};
    csv.header(columns);
    for (const PrecisionRecord& r : records) {
        const std::string cells[] = {
            r.algorithm,
            std::to_string(r.spec.size),
            r.spec.shift_exponent ? std::to_string(*r.spec.shift_exponent) : "none",
            std::to_string(r.spec.seed),
            std::string(kDistributionName),
            r.group_size ? std::to_string(*r.group_size) : "none",
            format_double17(r.computed_variance),
            r.oracle_variance,
            format_double17(r.digits),
        };
        csv.row(cells);
    }
}

inline void write_timing_csv(std::ostream& os, std::span<const std::string> metadata,
                             std::span<const TimingRecord> records) {
    CsvWriter csv(os);
    for (const std::string& line : metadata) csv.comment(line);
    csv.comment("nondeterministic-columns: mean_wall_seconds,stddev_wall_seconds");
    static constexpr std::string_view columns[] = {"algorithm",        "size",
                                                   "threads",          "repetitions",
                                                   "mean_wall_seconds", "stddev_wall_seconds"};
    csv.header(columns);
    for (const TimingRecord& r : records) {
        const std::string cells[] = {
            r.algorithm,
            std::to_string(r.size),
            std::to_string(r.threads),
            std::to_string(r.repetitions),
            format_double17(r.mean_wall_seconds),
            format_double17(r.stddev_wall_seconds),
        };
        csv.row(cells);
    }
}

inline void write_mantissa_csv(std::ostream& os, std::span<const std::string> metadata,
                               std::span<const MantissaRow> rows) {
    CsvWriter csv(os);
    for (const std::string& line : metadata) csv.comment(line);
    static constexpr std::string_view columns[] = {"shift_exponent", "s1_mantissa",
                                                   "s2_mantissa", "s", "variance"};
    csv.header(columns);
    for (const MantissaRow& r : rows) {
        const std::string cells[] = {
            r.shift_exponent ? std::to_string(*r.shift_exponent) : "none",
            r.s1_mantissa,
            r.s2_mantissa,
            format_double17(r.s),
            format_double17(r.variance),
        };
        csv.row(cells);
    }
}

// Dataset files are decimal text, one value per line, after the metadata
// comments: auditable by eye and exact on round-trip.
inline void write_dataset(std::ostream& os, std::span<const std::string> metadata,
                          std::span<const double> values) {
    for (const std::string& line : metadata) os << "# " << line << "\n";
    for (double v : values) os << format_double17(v) << "\n";
}

inline std::vector<double> read_dataset(std::istream& is) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw IoError("unparseable value at line " + std::to_string(lineno) + ": " + line);
        }
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) ++pos;
        if (pos != line.size())
            throw IoError("trailing garbage at line " + std::to_string(lineno) + ": " + line);
        values.push_back(require_finite(v));
    }
    return values;
}

} // namespace varlab
