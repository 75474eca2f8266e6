/**
 * @file report.hpp
 * @brief Per-noise tables of mean IoU by input-IoU bin and method, with the
 * set of methods not significantly worse than the best marked bold.
 *
 * JSON layout (one object per noise section):
 *
 *   [ { "noise_kind": "salt_pepper",
 *       "bins": [ { "lo": 0.5, "hi": 0.6, "n": 812,
 *                   "methods": [ { "name": "eigenshape", "mean_iou": 0.91,
 *                                  "bold": true, "failures": 0 } ] } ] } ]
 *
 * `n` and `mean_iou` are null when unknown or when the bin is empty.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace shapebench {

struct ReportCell {
    std::optional<double> mean_iou;
    bool bold = false;
    std::size_t failures = 0;
};

struct ReportRow {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<std::size_t> n;
    std::vector<ReportCell> cells;  // one per method, in section order
};

struct ReportSection {
    std::string noise_kind;
    std::vector<std::string> methods;
    std::vector<ReportRow> rows;
};

struct ReportTable {
    std::vector<ReportSection> sections;

    /// Throws std::invalid_argument when a row has the wrong number of cells
    /// or a nonempty row has no bold cell.
    void validate() const;
};

/// "0.5-0.6", "0.9-1".
std::string bin_label(double lo, double hi);

nlohmann::json to_json(const ReportTable& table);
ReportTable report_from_json(const nlohmann::json& j);

/// Markdown-compatible aligned table per section; bold cells as **0.966**.
std::string render_text(const ReportTable& table, int digits = 3);
/// Long format: noise_kind,lo,hi,n,method,mean_iou,bold,failures
std::string render_csv(const ReportTable& table);
std::string render_json(const ReportTable& table);

}  // namespace shapebench
