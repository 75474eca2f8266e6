/**
 * @file eval.hpp
 * @brief Input-IoU binning, per-bin scoring of denoisers, and significance-aware
 * best-method marking.
 */
#pragma once

#include "shapebench/core.hpp"
#include "shapebench/denoise.hpp"
#include "shapebench/report.hpp"
#include "shapebench/stats.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shapebench {

struct EvalRecord {
    std::string item_id;
    std::shared_ptr<const BinaryShape> truth;
    std::shared_ptr<const BinaryShape> noisy;
    double input_iou = 0.0;
    std::string noise_kind;
    std::map<std::string, double> output_iou;
};

/// Builds a record with input_iou = iou(truth, noisy).
EvalRecord make_record(std::string item_id, std::shared_ptr<const BinaryShape> truth,
                       std::shared_ptr<const BinaryShape> noisy, std::string noise_kind);

struct EvalBin {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<EvalRecord> records;
    std::size_t cap = 1000;
    std::uint64_t sample_seed = 0;
};

/// {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}
std::vector<double> default_bin_edges();

/// Parses "lo:hi:step" into edges lo, lo+step, ..., hi.
std::vector<double> parse_bin_spec(std::string_view spec);

/**
 * Partition records into [edges[i], edges[i+1]) bins, the last bin closed.
 * Records outside [edges.front(), edges.back()] are dropped. Bins with more
 * than `cap` records keep a uniform sample without replacement drawn from
 * derive_seed(seed, bin index); kept records stay in input order.
 * Throws std::invalid_argument when edges are not strictly increasing.
 */
std::vector<EvalBin> bin_by_input_iou(std::vector<EvalRecord> records,
                                      std::span<const double> edges, std::size_t cap = 1000,
                                      std::uint64_t seed = 0);

struct BinScores {
    double mean_iou = 0.0;            // NaN for an empty bin
    std::vector<double> ious;         // per record, in bin order
    std::vector<bool> failed;         // per record
    std::size_t failures = 0;
};

struct MethodScores {
    std::string name;
    std::vector<BinScores> bins;
};

/// Produces the method's output for a record.
using Predictor = std::function<BinaryShape(const EvalRecord&)>;

/// Scores a predictor on every record of every bin. A predictor that throws
/// or returns a mismatched shape scores IoU 0 and is flagged.
MethodScores evaluate_method(std::string name, const Predictor& predict,
                             const std::vector<EvalBin>& bins, int jobs = 1);

/// Convenience overload running a denoiser on each record's noisy shape.
MethodScores evaluate_denoiser(std::string name, const Denoiser& denoiser,
                               const std::vector<EvalBin>& bins, int jobs = 1);

/**
 * Bold flags for methods scored on the same records. The best methods (all
 * ties of the maximum mean) are bold; every other method is bold unless the
 * paired test against the first best method is significant at `alpha`.
 * With fewer than two records no test is possible and every method is bold.
 * Throws std::invalid_argument on empty input or unequal record counts.
 */
std::vector<bool> mark_best(std::span<const std::vector<double>> per_method, double alpha = 0.05);

/// One report section: a row per bin, a column per method.
ReportSection build_section(std::string noise_kind, const std::vector<EvalBin>& bins,
                            const std::vector<MethodScores>& methods, double alpha = 0.05);

}  // namespace shapebench
