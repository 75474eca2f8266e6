#include "shapebench/manifest.hpp"

#include "shapebench/text.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace shapebench {

namespace fs = std::filesystem;

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
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

std::string relative_to(const fs::path& p, const fs::path& base) {
    if (p.empty()) {
        return {};
    }
    const fs::path abs = fs::absolute(p).lexically_normal();
    const fs::path rel = abs.lexically_relative(fs::absolute(base).lexically_normal());
    return (rel.empty() ? abs : rel).generic_string();
}

fs::path resolve(const std::string& field, const fs::path& base) {
    if (field.empty()) {
        return {};
    }
    const fs::path p(field);
    return p.is_absolute() ? p : (base / p).lexically_normal();
}

}  // namespace

std::vector<std::string> parse_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) {
        throw std::invalid_argument("unterminated quoted field");
    }
    fields.push_back(std::move(cur));
    return fields;
}

void Manifest::validate() const {
    std::set<std::tuple<std::string, std::string, std::string, std::uint64_t, std::string>> seen;
    for (const auto& r : rows) {
        if (r.item_id.empty()) {
            throw std::invalid_argument("manifest: empty item_id");
        }
        if (r.split != "train" && r.split != "test") {
            throw std::invalid_argument("manifest: item '" + r.item_id + "' has split '" +
                                        r.split + "', expected train or test");
        }
        if (!seen.emplace(r.split, r.noise_kind, r.noise_params, r.seed, r.item_id).second) {
            throw std::invalid_argument("manifest: duplicate item '" + r.item_id + "'");
        }
    }
}

Manifest read_manifest(const fs::path& path, bool check_paths) {
    std::ifstream is(path);
    if (!is) {
        throw std::invalid_argument("cannot open manifest " + path.string());
    }
    const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::string line;
    if (!std::getline(is, line) || std::string(text::trim(line)) != kManifestHeader) {
        throw std::invalid_argument(path.string() + ": missing or unexpected header, expected '" +
                                    std::string(kManifestHeader) + "'");
    }
    Manifest m;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (text::trim(line).empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        try {
            const auto f = parse_csv_line(line);
            if (f.size() != 8) {
                throw std::invalid_argument("expected 8 fields, got " + std::to_string(f.size()));
            }
            ManifestRow r;
            r.item_id = f[0];
            r.split = f[1];
            r.clean_path = resolve(f[2], base);
            r.noisy_path = resolve(f[3], base);
            r.noise_kind = f[4];
            r.noise_params = f[5];
            r.seed = f[6].empty() ? 0 : text::parse_u64(f[6]);
            if (!text::trim(f[7]).empty()) {
                r.input_iou = text::parse_double(f[7]);
            }
            if (r.clean_path.empty()) {
                throw std::invalid_argument("empty clean_path");
            }
            if (check_paths) {
                if (!fs::exists(r.clean_path)) {
                    throw std::invalid_argument("clean_path does not exist: " +
                                                r.clean_path.string());
                }
                if (!r.noisy_path.empty() && !fs::exists(r.noisy_path)) {
                    throw std::invalid_argument("noisy_path does not exist: " +
                                                r.noisy_path.string());
                }
            }
            m.rows.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    m.validate();
    return m;
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
    manifest.validate();
    const fs::path base = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::ostringstream os;
    os << kManifestHeader << '\n';
    for (const auto& r : manifest.rows) {
        os << csv_escape(r.item_id) << ',' << csv_escape(r.split) << ','
           << csv_escape(relative_to(r.clean_path, base)) << ','
           << csv_escape(relative_to(r.noisy_path, base)) << ',' << csv_escape(r.noise_kind)
           << ',' << csv_escape(r.noise_params) << ',' << r.seed << ','
           << (r.input_iou ? text::format_number(*r.input_iou) : std::string()) << '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::invalid_argument("cannot write manifest " + path.string());
    }
    out << os.str();
}

}  // namespace shapebench
