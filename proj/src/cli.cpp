#include "shapebench/cli.hpp"

#include "shapebench/align.hpp"
#include "shapebench/denoise.hpp"
#include "shapebench/eigenshape.hpp"
#include "shapebench/eval.hpp"
#include "shapebench/image_io.hpp"
#include "shapebench/manifest.hpp"
#include "shapebench/noise.hpp"
#include "shapebench/parallel.hpp"
#include "shapebench/report.hpp"
#include "shapebench/rng.hpp"
#include "shapebench/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace shapebench::cli {

namespace fs = std::filesystem;

namespace {

class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw CommandError("not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && is_image_file(e.path())) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

/// stem -> file for every image in a directory. Duplicate stems are an error.
std::map<std::string, fs::path> index_by_stem(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    for (const auto& f : list_images(dir)) {
        if (!out.emplace(f.stem().string(), f).second) {
            throw CommandError("ambiguous files for item '" + f.stem().string() + "' in " +
                               dir.string());
        }
    }
    return out;
}

std::string extension_for(const std::string& format) {
    if (format == "pgm") return ".pgm";
    if (format == "png") return ".png";
    throw CommandError("unknown --format '" + format + "', expected pgm or png");
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw CommandError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw CommandError("cannot write " + path.string());
    }
    os << content;
}

// Per-item failures are collected and reported together.
int report_failures(const std::vector<std::string>& errors, std::string_view cmd,
                    std::ostream& err) {
    int failed = 0;
    for (const auto& e : errors) {
        if (!e.empty()) {
            err << "shapebench " << cmd << ": " << e << '\n';
            ++failed;
        }
    }
    if (failed > 0) {
        err << "shapebench " << cmd << ": " << failed << " item(s) failed\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// align

struct AlignOptions {
    std::string in;
    std::string out;
    AlignmentParams params;
    int jobs = 1;
    std::string format = "pgm";
};

int cmd_align(const AlignOptions& o, std::ostream& out, std::ostream& err) {
    o.params.validate();
    const auto files = list_images(o.in);
    const auto ext = extension_for(o.format);
    ensure_dir(o.out);
    std::vector<std::string> errors(files.size());
    parallel_for(files.size(), o.jobs, [&](std::size_t i) {
        try {
            const BinaryShape aligned = align(load_mask(files[i]), o.params);
            save_mask(aligned, fs::path(o.out) / (files[i].stem().string() + ext));
        } catch (const std::exception& e) {
            errors[i] = files[i].filename().string() + ": " + e.what();
        }
    });
    out << "aligned " << files.size() << " mask(s) into " << o.out << '\n';
    return report_failures(errors, "align", err);
}

// ---------------------------------------------------------------------------
// split

struct SplitOptions {
    std::string in;
    std::string out;
    std::uint64_t seed = 0;
    double train_fraction = 0.5;
};

int cmd_split(const SplitOptions& o, std::ostream& out, std::ostream&) {
    if (!(o.train_fraction >= 0.0 && o.train_fraction <= 1.0)) {
        throw CommandError("--train-fraction must lie in [0, 1]");
    }
    const auto files = list_images(o.in);
    if (files.empty()) {
        throw CommandError("no mask files in " + o.in);
    }
    std::vector<std::size_t> order(files.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Rng rng(o.seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.uniform_below(i)]);
    }
    const auto n_train = static_cast<std::size_t>(
        std::floor(o.train_fraction * static_cast<double>(files.size())));
    std::vector<bool> is_train(files.size(), false);
    for (std::size_t i = 0; i < n_train; ++i) {
        is_train[order[i]] = true;
    }
    Manifest m;
    for (std::size_t i = 0; i < files.size(); ++i) {
        ManifestRow r;
        r.item_id = files[i].stem().string();
        r.split = is_train[i] ? "train" : "test";
        r.clean_path = files[i];
        r.noise_kind = "clean";
        r.seed = o.seed;
        m.rows.push_back(std::move(r));
    }
    const fs::path out_path(o.out);
    if (out_path.has_parent_path()) {
        ensure_dir(out_path.parent_path());
    }
    write_manifest(m, out_path);
    out << "split " << files.size() << " item(s): " << n_train << " train, "
        << files.size() - n_train << " test -> " << o.out << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// perturb

struct PerturbOptions {
    std::string manifest;
    std::string out;
    std::string manifest_out;
    std::string noise;
    std::vector<double> p;
    std::vector<int> r;
    std::vector<double> t;
    std::optional<int> count;
    int k = 10;
    std::string rect;
    std::optional<int> variants;
    std::string patches;
    std::string images;
    std::uint64_t seed = 0;
    std::string split = "test";
    int jobs = 1;
    std::string format = "pgm";
};

std::string kind_tag(NoiseKind k) {
    switch (k) {
        case NoiseKind::salt_pepper: return "salt";
        case NoiseKind::circle: return "circle";
        case NoiseKind::real_image: return "real";
        case NoiseKind::occlusion: return "occl";
        case NoiseKind::thresh_prob: return "tprob";
        case NoiseKind::detection_external: return "det";
    }
    return "noise";
}

std::string two_digits(std::size_t v) {
    return (v < 10 ? "0" : "") + std::to_string(v);
}

int cmd_perturb(const PerturbOptions& o, std::ostream& out, std::ostream& err) {
    const auto kind = parse_noise_kind(o.noise);
    if (!kind) {
        throw CommandError("unknown --noise '" + o.noise +
                           "', expected salt, circle, real, occlusion or thresh-prob");
    }
    if (*kind == NoiseKind::detection_external) {
        throw CommandError("detection noise cannot be generated; list the predicted masks as "
                           "noisy_path with noise_kind detection_external instead");
    }
    const auto ext = extension_for(o.format);
    const Manifest in = read_manifest(o.manifest);

    std::vector<const ManifestRow*> clean;
    for (const auto& row : in.rows) {
        if (row.noisy_path.empty() && (o.split == "all" || row.split == o.split)) {
            clean.push_back(&row);
        }
    }
    if (clean.empty()) {
        throw CommandError("no clean rows with split '" + o.split + "' in " + o.manifest);
    }

    // One template per noise level.
    std::vector<NoiseSpec> levels;
    NoiseSpec base;
    base.kind = *kind;
    base.count = o.count;
    base.clusters = o.k;
    switch (*kind) {
        case NoiseKind::salt_pepper:
            for (double p : o.p.empty() ? default_flip_grid() : o.p) {
                NoiseSpec s = base;
                s.flip_prob = p;
                levels.push_back(s);
            }
            break;
        case NoiseKind::circle:
            for (int r : o.r.empty() ? default_radius_grid() : o.r) {
                NoiseSpec s = base;
                s.radius = r;
                levels.push_back(s);
            }
            break;
        case NoiseKind::real_image:
            if (o.patches.empty()) {
                throw CommandError("--noise real needs --patches DIR of color images");
            }
            for (double t : o.t.empty() ? default_real_thresholds() : o.t) {
                NoiseSpec s = base;
                s.threshold = t;
                levels.push_back(s);
            }
            break;
        case NoiseKind::thresh_prob: {
            if (o.images.empty()) {
                throw CommandError("--noise thresh-prob needs --images DIR of color images");
            }
            std::vector<double> ts = o.t;
            if (ts.empty()) {
                for (int i = 1; i <= 9; ++i) {
                    ts.push_back(i / 10.0);
                }
            }
            for (double t : ts) {
                NoiseSpec s = base;
                s.threshold = t;
                levels.push_back(s);
            }
            break;
        }
        case NoiseKind::occlusion: {
            NoiseSpec s = base;
            if (!o.rect.empty()) {
                apply_params_string(s, "rect=" + o.rect);
            }
            levels.push_back(s);
            break;
        }
        case NoiseKind::detection_external:
            break;
    }
    for (const auto& s : levels) {
        s.validate();
    }
    const int variants = o.variants.value_or(*kind == NoiseKind::occlusion ? 10 : 1);
    if (variants < 1) {
        throw CommandError("--variants must be >= 1");
    }

    std::vector<fs::path> patch_files;
    if (*kind == NoiseKind::real_image) {
        patch_files = list_images(o.patches);
        if (patch_files.empty()) {
            throw CommandError("no patch images in " + o.patches);
        }
    }
    std::map<std::string, fs::path> color_images;
    if (*kind == NoiseKind::thresh_prob) {
        color_images = index_by_stem(o.images);
    }

    ensure_dir(o.out);
    const std::size_t n_levels = levels.size();
    const auto n_var = static_cast<std::size_t>(variants);
    const std::size_t n_units = clean.size() * n_var;
    std::vector<ManifestRow> rows(n_units * n_levels);
    std::vector<std::string> errors(n_units);

    parallel_for(n_units, o.jobs, [&](std::size_t unit) {
        const ManifestRow& src = *clean[unit / n_var];
        const std::size_t v = unit % n_var;
        try {
            const BinaryShape shape = load_mask(src.clean_path);
            const std::uint64_t unit_seed = derive_seed(mix64(o.seed ^ 0x5348415045ULL), unit);
            NoiseInputs inputs;
            ColorImage patch;
            ColorImage color;
            std::optional<ProbabilityMap> pmap;
            if (*kind == NoiseKind::real_image) {
                Rng rng(unit_seed);
                const auto& file = patch_files[rng.uniform_below(patch_files.size())];
                const ColorImage full = load_color_image(file);
                if (full.width < shape.width() || full.height < shape.height()) {
                    throw CommandError("patch source " + file.filename().string() +
                                       " is smaller than the shape");
                }
                const auto px = rng.uniform_int(0, full.width - shape.width());
                const auto py = rng.uniform_int(0, full.height - shape.height());
                patch = full.crop(static_cast<int>(px), static_cast<int>(py), shape.width(),
                                  shape.height());
                inputs.patch = &patch;
            }
            if (*kind == NoiseKind::thresh_prob) {
                const auto it = color_images.find(src.item_id);
                if (it == color_images.end()) {
                    throw CommandError("no color image named '" + src.item_id + "' in " +
                                       o.images);
                }
                color = load_color_image(it->second);
                pmap = probability_map(color, shape, o.k, unit_seed).first;
            }
            for (std::size_t l = 0; l < n_levels; ++l) {
                const std::size_t index = unit * n_levels + l;
                NoiseSpec spec = levels[l];
                spec.seed = derive_seed(o.seed, index);
                BinaryShape noisy;
                if (*kind == NoiseKind::thresh_prob) {
                    noisy = threshold_probability(*pmap, spec.threshold);
                } else {
                    if (*kind == NoiseKind::circle && !spec.count) {
                        spec.count = default_circle_count(shape, spec.radius);
                    }
                    if (*kind == NoiseKind::occlusion && !spec.rect) {
                        spec.rect = sample_occluder(shape, spec.seed);
                    }
                    noisy = apply_noise(spec, shape, inputs);
                }
                ManifestRow row;
                row.item_id = src.item_id + "__" + kind_tag(*kind) + "_" + two_digits(l);
                if (n_var > 1) {
                    row.item_id += "_v" + two_digits(v);
                }
                row.split = src.split;
                row.clean_path = src.clean_path;
                row.noisy_path = fs::path(o.out) / (row.item_id + ext);
                row.noise_kind = std::string(to_string(*kind));
                row.noise_params = spec.params_string();
                row.seed = spec.seed;
                row.input_iou = iou(shape, noisy);
                save_mask(noisy, row.noisy_path);
                rows[index] = std::move(row);
            }
        } catch (const std::exception& e) {
            errors[unit] = src.item_id + ": " + e.what();
        }
    });
    if (int rc = report_failures(errors, "perturb", err); rc != 0) {
        return rc;
    }
    Manifest m;
    m.rows = std::move(rows);
    const fs::path manifest_out =
        o.manifest_out.empty() ? fs::path(o.out) / "manifest.csv" : fs::path(o.manifest_out);
    write_manifest(m, manifest_out);
    out << "wrote " << m.rows.size() << " noisy mask(s) and " << manifest_out.string() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// train-eigen

struct TrainOptions {
    std::string manifest;
    std::string in;
    std::string out;
    std::optional<int> components;
    std::string split = "train";
};

int cmd_train_eigen(const TrainOptions& o, std::ostream& out, std::ostream&) {
    std::vector<fs::path> files;
    if (!o.manifest.empty()) {
        std::set<fs::path> seen;
        for (const auto& row : read_manifest(o.manifest).rows) {
            if ((o.split == "all" || row.split == o.split) && seen.insert(row.clean_path).second) {
                files.push_back(row.clean_path);
            }
        }
    } else if (!o.in.empty()) {
        files = list_images(o.in);
    } else {
        throw CommandError("train-eigen needs --manifest or --in");
    }
    if (files.size() < 2) {
        throw CommandError("train-eigen needs at least 2 training shapes, found " +
                           std::to_string(files.size()));
    }
    std::vector<BinaryShape> shapes;
    for (const auto& f : files) {
        try {
            shapes.push_back(load_mask(f));
        } catch (const std::exception& e) {
            throw CommandError(f.filename().string() + ": " + e.what());
        }
    }
    const int max_m = static_cast<int>(shapes.size()) - 1;
    const int m = o.components.value_or(std::min(20, max_m));
    const EigenshapeModel model = train_eigenshape(shapes, m);
    save_model(model, o.out);
    double total = 0.0;
    for (double v : model.variances) {
        total += v;
    }
    out << "trained eigenshape model on " << shapes.size() << " shape(s), " << m
        << " component(s), retained variance " << text::format_fixed(total, 3) << " -> " << o.out
        << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseOptions {
    std::string manifest;
    std::string out;
    std::string method = "identity";
    std::string model;
    DenoiserConfig cfg;
    int jobs = 1;
    std::string format = "pgm";
};

int cmd_denoise(DenoiseOptions o, std::ostream& out, std::ostream& err) {
    const auto method = parse_denoise_method(o.method);
    if (!method) {
        throw CommandError("unknown --method '" + o.method +
                           "', expected identity, eigenshape, morphological or median");
    }
    o.cfg.method = *method;
    std::shared_ptr<const EigenshapeModel> model;
    if (*method == DenoiseMethod::eigenshape) {
        if (o.model.empty()) {
            throw CommandError("--method eigenshape needs --model FILE");
        }
        model = std::make_shared<const EigenshapeModel>(load_model(o.model));
    }
    const Denoiser denoiser = make_denoiser(o.cfg, model);
    const auto ext = extension_for(o.format);
    const Manifest m = read_manifest(o.manifest);
    std::vector<const ManifestRow*> rows;
    for (const auto& r : m.rows) {
        if (!r.noisy_path.empty()) {
            rows.push_back(&r);
        }
    }
    if (rows.empty()) {
        throw CommandError("manifest " + o.manifest + " lists no noisy masks");
    }
    ensure_dir(o.out);
    std::vector<std::string> errors(rows.size());
    parallel_for(rows.size(), o.jobs, [&](std::size_t i) {
        try {
            const BinaryShape result = denoiser(load_mask(rows[i]->noisy_path));
            save_mask(result, fs::path(o.out) / (rows[i]->item_id + ext));
        } catch (const std::exception& e) {
            errors[i] = rows[i]->item_id + ": " + e.what();
        }
    });
    out << "denoised " << rows.size() << " mask(s) with " << to_string(*method) << " into "
        << o.out << '\n';
    return report_failures(errors, "denoise", err);
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
    std::string manifest;
    std::vector<std::string> preds;
    bool include_input = false;
    std::string bins = "0.5:1.0:0.1";
    std::size_t max_per_bin = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string split = "test";
    std::string out;
    int jobs = 1;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
    if (o.preds.empty() && !o.include_input) {
        throw CommandError("evaluate needs at least one --pred NAME=DIR (or --include-input)");
    }
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) {
        throw CommandError("--alpha must lie in (0, 1)");
    }
    const auto edges = parse_bin_spec(o.bins);

    struct PredSource {
        std::string name;
        std::map<std::string, fs::path> files;
    };
    std::vector<PredSource> sources;
    std::set<std::string> names;
    if (o.include_input) {
        names.insert("input");
    }
    for (const auto& spec : o.preds) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw CommandError("--pred expects NAME=DIR, got '" + spec + "'");
        }
        PredSource src{spec.substr(0, eq), index_by_stem(spec.substr(eq + 1))};
        if (!names.insert(src.name).second) {
            throw CommandError("duplicate method name '" + src.name + "'");
        }
        sources.push_back(std::move(src));
    }

    const Manifest m = read_manifest(o.manifest);
    std::vector<const ManifestRow*> rows;
    std::vector<std::string> kinds;
    for (const auto& r : m.rows) {
        if (r.noisy_path.empty() || !(o.split == "all" || r.split == o.split)) {
            continue;
        }
        rows.push_back(&r);
        if (std::find(kinds.begin(), kinds.end(), r.noise_kind) == kinds.end()) {
            kinds.push_back(r.noise_kind);
        }
    }
    if (rows.empty()) {
        throw CommandError("no noisy rows with split '" + o.split + "' in " + o.manifest);
    }

    // Load every distinct clean mask once.
    std::vector<fs::path> clean_paths;
    std::map<fs::path, std::size_t> clean_index;
    for (const auto* r : rows) {
        if (clean_index.emplace(r->clean_path, clean_paths.size()).second) {
            clean_paths.push_back(r->clean_path);
        }
    }
    std::vector<std::shared_ptr<const BinaryShape>> truths(clean_paths.size());
    parallel_for(clean_paths.size(), o.jobs, [&](std::size_t i) {
        truths[i] = std::make_shared<const BinaryShape>(load_mask(clean_paths[i]));
    });

    // Noisy masks are needed for the input column or a missing input_iou.
    std::vector<EvalRecord> records(rows.size());
    std::vector<std::string> errors(rows.size());
    parallel_for(rows.size(), o.jobs, [&](std::size_t i) {
        const ManifestRow& r = *rows[i];
        EvalRecord& rec = records[i];
        rec.item_id = r.item_id;
        rec.noise_kind = r.noise_kind;
        rec.truth = truths[clean_index.at(r.clean_path)];
        try {
            if (o.include_input || !r.input_iou) {
                rec.noisy = std::make_shared<const BinaryShape>(load_mask(r.noisy_path));
            }
            rec.input_iou = r.input_iou ? *r.input_iou : iou(*rec.truth, *rec.noisy);
        } catch (const std::exception& e) {
            errors[i] = r.item_id + ": " + e.what();
        }
    });
    if (int rc = report_failures(errors, "evaluate", err); rc != 0) {
        return rc;
    }

    ReportTable table;
    std::size_t total_failures = 0;
    for (std::size_t s = 0; s < kinds.size(); ++s) {
        std::vector<EvalRecord> subset;
        for (auto& rec : records) {
            if (rec.noise_kind == kinds[s]) {
                subset.push_back(rec);
            }
        }
        const auto bins =
            bin_by_input_iou(std::move(subset), edges, o.max_per_bin, derive_seed(o.seed, s));
        std::vector<MethodScores> methods;
        if (o.include_input) {
            methods.push_back(evaluate_method(
                "input",
                [](const EvalRecord& r) {
                    if (!r.noisy) {
                        throw CommandError("noisy mask not loaded");
                    }
                    return *r.noisy;
                },
                bins, o.jobs));
        }
        for (const auto& src : sources) {
            methods.push_back(evaluate_method(
                src.name,
                [&src](const EvalRecord& r) {
                    const auto it = src.files.find(r.item_id);
                    if (it == src.files.end()) {
                        throw CommandError("no prediction for " + r.item_id);
                    }
                    return load_mask(it->second);
                },
                bins, o.jobs));
        }
        for (const auto& ms : methods) {
            for (std::size_t b = 0; b < ms.bins.size(); ++b) {
                for (std::size_t i = 0; i < ms.bins[b].failed.size(); ++i) {
                    if (ms.bins[b].failed[i]) {
                        ++total_failures;
                        err << "shapebench evaluate: " << ms.name << ": could not score "
                            << bins[b].records[i].item_id << " (scored as IoU 0)\n";
                    }
                }
            }
        }
        table.sections.push_back(build_section(kinds[s], bins, methods, o.alpha));
    }

    const std::string json = render_json(table);
    if (o.out.empty()) {
        out << json;
    } else {
        const fs::path p(o.out);
        if (p.has_parent_path()) {
            ensure_dir(p.parent_path());
        }
        write_text_file(p, json);
        out << "evaluated " << rows.size() << " record(s) in " << kinds.size()
            << " noise section(s) -> " << o.out << '\n';
    }
    if (total_failures > 0) {
        err << "shapebench evaluate: " << total_failures << " prediction(s) flagged\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportOptions {
    std::string in;
    std::string format = "text";
    std::string out;
};

int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream&) {
    std::ifstream is(o.in);
    if (!is) {
        throw CommandError("cannot open report " + o.in);
    }
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CommandError(o.in + ": malformed JSON: " + e.what());
    }
    ReportTable table;
    try {
        table = report_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw CommandError(o.in + ": " + e.what());
    }
    std::string rendered;
    if (o.format == "text") {
        rendered = render_text(table);
    } else if (o.format == "csv") {
        rendered = render_csv(table);
    } else if (o.format == "json") {
        rendered = render_json(table);
    } else {
        throw CommandError("unknown --format '" + o.format + "', expected text, csv or json");
    }
    if (o.out.empty()) {
        out << rendered;
    } else {
        write_text_file(o.out, rendered);
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"shapebench: shape denoising benchmark toolkit", "shapebench"};
    app.require_subcommand(1);

    AlignOptions align_o;
    auto* align_cmd = app.add_subcommand("align", "Canonicalize every mask in a directory");
    align_cmd->add_option("--in", align_o.in, "Directory of raw masks")->required();
    align_cmd->add_option("--out", align_o.out, "Output directory")->required();
    align_cmd->add_option("--canvas", align_o.params.canvas, "Output canvas size")
        ->capture_default_str();
    align_cmd->add_option("--radius", align_o.params.target_radius,
                          "Target radial percentile distance")
        ->capture_default_str();
    align_cmd->add_option("--percentile", align_o.params.percentile, "Radial percentile")
        ->capture_default_str();
    align_cmd->add_option("--threshold", align_o.params.rebinarize_threshold,
                          "Re-binarization threshold")
        ->capture_default_str();
    align_cmd->add_option("--jobs", align_o.jobs, "Worker threads")->capture_default_str();
    align_cmd->add_option("--format", align_o.format, "pgm or png")->capture_default_str();

    SplitOptions split_o;
    auto* split_cmd = app.add_subcommand("split", "Seeded train/test split into a manifest");
    split_cmd->add_option("--in", split_o.in, "Directory of aligned masks")->required();
    split_cmd->add_option("--out", split_o.out, "Manifest CSV to write")->required();
    split_cmd->add_option("--seed", split_o.seed, "Master seed")->capture_default_str();
    split_cmd->add_option("--train-fraction", split_o.train_fraction, "Fraction used for training")
        ->capture_default_str();

    PerturbOptions pert_o;
    auto* pert_cmd = app.add_subcommand("perturb", "Apply a noise grid to clean masks");
    pert_cmd->add_option("--manifest", pert_o.manifest, "Manifest with clean rows")->required();
    pert_cmd->add_option("--out", pert_o.out, "Directory for noisy masks")->required();
    pert_cmd->add_option("--manifest-out", pert_o.manifest_out,
                         "Manifest to write (default OUT/manifest.csv)");
    pert_cmd->add_option("--noise", pert_o.noise, "salt, circle, real, occlusion, thresh-prob")
        ->required();
    pert_cmd->add_option("--p", pert_o.p, "Flip probabilities")->delimiter(',');
    pert_cmd->add_option("--r", pert_o.r, "Circle radii")->delimiter(',');
    pert_cmd->add_option("--t", pert_o.t, "Thresholds")->delimiter(',');
    pert_cmd->add_option("--count", pert_o.count, "Circles per image (default from perimeter)");
    pert_cmd->add_option("--k", pert_o.k, "k-means clusters")->capture_default_str();
    pert_cmd->add_option("--rect", pert_o.rect, "Fixed occluder x,y,w,h");
    pert_cmd->add_option("--variants", pert_o.variants, "Noisy variants per level");
    pert_cmd->add_option("--patches", pert_o.patches, "Color images for real-image noise");
    pert_cmd->add_option("--images", pert_o.images, "Color images for thresh-prob noise");
    pert_cmd->add_option("--seed", pert_o.seed, "Master seed")->capture_default_str();
    pert_cmd->add_option("--split", pert_o.split, "train, test or all")->capture_default_str();
    pert_cmd->add_option("--jobs", pert_o.jobs, "Worker threads")->capture_default_str();
    pert_cmd->add_option("--format", pert_o.format, "pgm or png")->capture_default_str();

    TrainOptions train_o;
    auto* train_cmd = app.add_subcommand("train-eigen", "Fit and save an eigenshape model");
    train_cmd->add_option("--manifest", train_o.manifest, "Manifest; uses clean masks of --split");
    train_cmd->add_option("--in", train_o.in, "Directory of training masks");
    train_cmd->add_option("--out", train_o.out, "Model file")->required();
    train_cmd->add_option("--components", train_o.components,
                          "Number of components (default min(20, n-1))");
    train_cmd->add_option("--split", train_o.split, "train, test or all")->capture_default_str();

    DenoiseOptions den_o;
    auto* den_cmd = app.add_subcommand("denoise", "Run a baseline denoiser over a manifest");
    den_cmd->add_option("--manifest", den_o.manifest, "Manifest with noisy rows")->required();
    den_cmd->add_option("--out", den_o.out, "Directory for predictions")->required();
    den_cmd->add_option("--method", den_o.method, "identity, eigenshape, morphological, median")
        ->capture_default_str();
    den_cmd->add_option("--model", den_o.model, "Eigenshape model file");
    den_cmd->add_option("--components", den_o.cfg.n_components, "Eigenshape components used")
        ->capture_default_str();
    den_cmd->add_option("--radius", den_o.cfg.struct_radius, "Structuring element radius")
        ->capture_default_str();
    den_cmd->add_option("--window", den_o.cfg.window, "Median window (odd)")
        ->capture_default_str();
    den_cmd->add_option("--threshold", den_o.cfg.rebinarize_threshold,
                        "Eigenshape reconstruction threshold")
        ->capture_default_str();
    den_cmd->add_option("--jobs", den_o.jobs, "Worker threads")->capture_default_str();
    den_cmd->add_option("--format", den_o.format, "pgm or png")->capture_default_str();

    EvaluateOptions ev_o;
    auto* ev_cmd = app.add_subcommand("evaluate", "Score prediction directories by input-IoU bin");
    ev_cmd->add_option("--manifest", ev_o.manifest, "Manifest with noisy rows")->required();
    ev_cmd->add_option("--pred", ev_o.preds, "NAME=DIR, repeatable");
    ev_cmd->add_flag("--include-input", ev_o.include_input, "Add the noisy input as a method");
    ev_cmd->add_option("--bins", ev_o.bins, "lo:hi:step")->capture_default_str();
    ev_cmd->add_option("--max-per-bin", ev_o.max_per_bin, "Records kept per bin")
        ->capture_default_str();
    ev_cmd->add_option("--alpha", ev_o.alpha, "Significance level")->capture_default_str();
    ev_cmd->add_option("--seed", ev_o.seed, "Seed for bin downsampling")->capture_default_str();
    ev_cmd->add_option("--split", ev_o.split, "train, test or all")->capture_default_str();
    ev_cmd->add_option("--out", ev_o.out, "Report JSON (default stdout)");
    ev_cmd->add_option("--jobs", ev_o.jobs, "Worker threads")->capture_default_str();

    ReportOptions rep_o;
    auto* rep_cmd = app.add_subcommand("report", "Render a report JSON");
    rep_cmd->add_option("--in", rep_o.in, "Report JSON from evaluate")->required();
    rep_cmd->add_option("--format", rep_o.format, "text, csv or json")->capture_default_str();
    rep_cmd->add_option("--out", rep_o.out, "Output file (default stdout)");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("shapebench");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "shapebench: " << e.what() << '\n';
        return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (sub == align_cmd) return cmd_align(align_o, out, err);
        if (sub == split_cmd) return cmd_split(split_o, out, err);
        if (sub == pert_cmd) return cmd_perturb(pert_o, out, err);
        if (sub == train_cmd) return cmd_train_eigen(train_o, out, err);
        if (sub == den_cmd) return cmd_denoise(den_o, out, err);
        if (sub == ev_cmd) return cmd_evaluate(ev_o, out, err);
        if (sub == rep_cmd) return cmd_report(rep_o, out, err);
    } catch (const std::exception& e) {
        err << "shapebench " << name << ": " << e.what() << '\n';
        return 1;
    }
    err << "shapebench: unknown command\n";
    return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace shapebench::cli
