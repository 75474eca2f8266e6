#include "shapebench/report.hpp"

#include "shapebench/text.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace shapebench {

namespace {

std::string edge_text(double v) {
    return text::format_number(std::round(v * 1e9) / 1e9);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

void ReportTable::validate() const {
    for (const auto& sec : sections) {
        for (const auto& row : sec.rows) {
            if (row.cells.size() != sec.methods.size()) {
                throw std::invalid_argument("report: section '" + sec.noise_kind +
                                            "' has a row with " +
                                            std::to_string(row.cells.size()) + " cells for " +
                                            std::to_string(sec.methods.size()) + " methods");
            }
            const bool has_values = std::any_of(row.cells.begin(), row.cells.end(),
                                                [](const ReportCell& c) { return c.mean_iou; });
            const bool has_bold = std::any_of(row.cells.begin(), row.cells.end(),
                                              [](const ReportCell& c) { return c.bold; });
            if (has_values && !has_bold) {
                throw std::invalid_argument("report: row " + bin_label(row.lo, row.hi) +
                                            " of '" + sec.noise_kind + "' has no bold cell");
            }
        }
    }
}

std::string bin_label(double lo, double hi) {
    return edge_text(lo) + "-" + edge_text(hi);
}

nlohmann::json to_json(const ReportTable& table) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& sec : table.sections) {
        nlohmann::json bins = nlohmann::json::array();
        for (const auto& row : sec.rows) {
            nlohmann::json methods = nlohmann::json::array();
            for (std::size_t m = 0; m < sec.methods.size(); ++m) {
                const ReportCell& c = row.cells[m];
                methods.push_back({{"name", sec.methods[m]},
                                   {"mean_iou", c.mean_iou ? nlohmann::json(*c.mean_iou)
                                                           : nlohmann::json(nullptr)},
                                   {"bold", c.bold},
                                   {"failures", c.failures}});
            }
            bins.push_back({{"lo", row.lo},
                            {"hi", row.hi},
                            {"n", row.n ? nlohmann::json(*row.n) : nlohmann::json(nullptr)},
                            {"methods", std::move(methods)}});
        }
        out.push_back({{"noise_kind", sec.noise_kind}, {"bins", std::move(bins)}});
    }
    return out;
}

ReportTable report_from_json(const nlohmann::json& j) {
    if (!j.is_array()) {
        throw std::invalid_argument("report JSON: top level must be an array of sections");
    }
    ReportTable table;
    for (const auto& js : j) {
        ReportSection sec;
        sec.noise_kind = js.at("noise_kind").get<std::string>();
        for (const auto& jb : js.at("bins")) {
            ReportRow row;
            row.lo = jb.at("lo").get<double>();
            row.hi = jb.at("hi").get<double>();
            if (!jb.at("n").is_null()) {
                row.n = jb.at("n").get<std::size_t>();
            }
            std::vector<std::string> names;
            for (const auto& jm : jb.at("methods")) {
                names.push_back(jm.at("name").get<std::string>());
                ReportCell cell;
                if (!jm.at("mean_iou").is_null()) {
                    cell.mean_iou = jm.at("mean_iou").get<double>();
                }
                cell.bold = jm.at("bold").get<bool>();
                cell.failures = jm.value("failures", std::size_t{0});
                row.cells.push_back(cell);
            }
            if (sec.rows.empty()) {
                sec.methods = names;
            } else if (names != sec.methods) {
                throw std::invalid_argument("report JSON: method columns differ between bins of '" +
                                            sec.noise_kind + "'");
            }
            sec.rows.push_back(std::move(row));
        }
        table.sections.push_back(std::move(sec));
    }
    table.validate();
    return table;
}

std::string render_text(const ReportTable& table, int digits) {
    table.validate();
    std::ostringstream os;
    bool first_section = true;
    for (const auto& sec : table.sections) {
        if (!first_section) {
            os << '\n';
        }
        first_section = false;
        const bool show_n = std::any_of(sec.rows.begin(), sec.rows.end(),
                                        [](const ReportRow& r) { return r.n.has_value(); });

        std::vector<std::vector<std::string>> grid;
        std::vector<std::string> header{"Input IoU"};
        if (show_n) {
            header.emplace_back("n");
        }
        header.insert(header.end(), sec.methods.begin(), sec.methods.end());
        grid.push_back(std::move(header));
        bool any_failures = false;
        for (const auto& row : sec.rows) {
            std::vector<std::string> line{bin_label(row.lo, row.hi)};
            if (show_n) {
                line.push_back(row.n ? std::to_string(*row.n) : "-");
            }
            for (const auto& c : row.cells) {
                std::string v = c.mean_iou ? text::format_fixed(*c.mean_iou, digits) : "-";
                if (c.bold) {
                    v = "**" + v + "**";
                }
                if (c.failures > 0) {
                    v += "!";
                    any_failures = true;
                }
                line.push_back(std::move(v));
            }
            grid.push_back(std::move(line));
        }

        std::vector<std::size_t> width(grid.front().size(), 0);
        for (const auto& line : grid) {
            for (std::size_t c = 0; c < line.size(); ++c) {
                width[c] = std::max(width[c], line[c].size());
            }
        }
        auto emit = [&os, &width](const std::vector<std::string>& line) {
            os << '|';
            for (std::size_t c = 0; c < line.size(); ++c) {
                os << ' ' << line[c] << std::string(width[c] - line[c].size(), ' ') << " |";
            }
            os << '\n';
        };
        os << "## " << sec.noise_kind << "\n\n";
        emit(grid.front());
        os << '|';
        for (std::size_t c = 0; c < width.size(); ++c) {
            os << std::string(width[c] + 2, '-') << '|';
        }
        os << '\n';
        for (std::size_t r = 1; r < grid.size(); ++r) {
            emit(grid[r]);
        }
        if (any_failures) {
            os << "\n! some records failed and were scored as IoU 0\n";
        }
    }
    return os.str();
}

std::string render_csv(const ReportTable& table) {
    table.validate();
    std::ostringstream os;
    os << "noise_kind,lo,hi,n,method,mean_iou,bold,failures\n";
    for (const auto& sec : table.sections) {
        for (const auto& row : sec.rows) {
            for (std::size_t m = 0; m < sec.methods.size(); ++m) {
                const ReportCell& c = row.cells[m];
                os << csv_field(sec.noise_kind) << ',' << edge_text(row.lo) << ','
                   << edge_text(row.hi) << ',' << (row.n ? std::to_string(*row.n) : "") << ','
                   << csv_field(sec.methods[m]) << ','
                   << (c.mean_iou ? text::format_number(*c.mean_iou) : "") << ','
                   << (c.bold ? 1 : 0) << ',' << c.failures << '\n';
            }
        }
    }
    return os.str();
}

std::string render_json(const ReportTable& table) {
    table.validate();
    return to_json(table).dump(2) + "\n";
}

}  // namespace shapebench
