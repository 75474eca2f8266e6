#include "shapebench/eigenshape.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace shapebench {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'H', 'B', 'E', 'I', 'G', 'N', '1'};

void check_vector(const EigenshapeModel& model, std::span<const double> x, int n_components) {
    if (x.size() != model.dimension()) {
        throw ShapeError("eigenshape: input has " + std::to_string(x.size()) +
                         " pixels, model expects " + std::to_string(model.dimension()));
    }
    if (n_components < 0 || n_components > model.num_components()) {
        throw ShapeError("eigenshape: n_components must lie in [0, " +
                         std::to_string(model.num_components()) + "]");
    }
}

// Gram-Schmidt of unit pixel vectors against the existing components.
void complete_basis(std::vector<std::vector<double>>& comps, std::size_t target, std::size_t dim) {
    for (std::size_t e = 0; e < dim && comps.size() < target; ++e) {
        std::vector<double> v(dim, 0.0);
        v[e] = 1.0;
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& c : comps) {
                const double dot = std::inner_product(c.begin(), c.end(), v.begin(), 0.0);
                for (std::size_t i = 0; i < dim; ++i) {
                    v[i] -= dot * c[i];
                }
            }
        }
        double norm = 0.0;
        for (double a : v) {
            norm += a * a;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-6) {
            continue;
        }
        for (double& a : v) {
            a /= norm;
        }
        comps.push_back(std::move(v));
    }
}

void write_u32(std::ostream& os, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) {
        b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    os.write(b.data(), 4);
}

void write_f64(std::ostream& os, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) {
        b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    os.write(b.data(), 8);
}

std::uint32_t read_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    is.read(reinterpret_cast<char*>(b.data()), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | b[static_cast<std::size_t>(i)];
    }
    return v;
}

double read_f64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | b[static_cast<std::size_t>(i)];
    }
    return std::bit_cast<double>(v);
}

}  // namespace

std::vector<double> vectorize(const BinaryShape& s) {
    return std::vector<double>(s.pixels().begin(), s.pixels().end());
}

EigenshapeModel train_eigenshape(std::span<const BinaryShape> train, int m) {
    const auto n = static_cast<Eigen::Index>(train.size());
    if (n < 2) {
        throw ShapeError("train_eigenshape: need at least 2 training shapes");
    }
    const BinaryShape& first = train.front();
    if (first.width() != first.height()) {
        throw ShapeError("train_eigenshape: shapes must be square canvases");
    }
    for (const auto& s : train) {
        if (!s.same_dimensions(first)) {
            throw ShapeError("train_eigenshape: training shapes differ in size");
        }
    }
    const auto dim = static_cast<Eigen::Index>(first.size());
    if (m < 1 || m > std::min<Eigen::Index>(n - 1, dim)) {
        throw ShapeError("train_eigenshape: m must lie in [1, min(n-1, D)]");
    }

    Eigen::MatrixXd X(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto px = train[static_cast<std::size_t>(i)].pixels();
        for (Eigen::Index j = 0; j < dim; ++j) {
            X(i, j) = px[static_cast<std::size_t>(j)];
        }
    }
    const Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;
    const Eigen::MatrixXd gram = X * X.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw ShapeError("train_eigenshape: eigendecomposition failed");
    }
    // Eigen returns ascending eigenvalues.
    const Eigen::VectorXd evals = solver.eigenvalues().reverse();
    const Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

    EigenshapeModel model;
    model.canvas = first.width();
    model.mean.assign(mean.data(), mean.data() + dim);
    const double scale_floor = 1e-9 * std::max(1.0, evals(0));
    for (int j = 0; j < m; ++j) {
        const double lambda = std::max(0.0, evals(j));
        model.variances.push_back(lambda / static_cast<double>(n - 1));
        if (lambda <= scale_floor) {
            continue;
        }
        Eigen::VectorXd c = X.transpose() * evecs.col(j);
        c /= c.norm();
        // Sign convention: first entry with non-negligible magnitude is positive.
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (std::abs(c(i)) > 1e-12) {
                if (c(i) < 0) {
                    c = -c;
                }
                break;
            }
        }
        model.components.emplace_back(c.data(), c.data() + dim);
    }
    for (auto& v : model.variances) {
        if (v * static_cast<double>(n - 1) <= scale_floor) {
            v = 0.0;
        }
    }
    complete_basis(model.components, static_cast<std::size_t>(m), static_cast<std::size_t>(dim));
    return model;
}

std::vector<double> project(const EigenshapeModel& model, std::span<const double> x,
                            int n_components) {
    check_vector(model, x, n_components);
    std::vector<double> coef(static_cast<std::size_t>(n_components), 0.0);
    for (std::size_t j = 0; j < coef.size(); ++j) {
        const auto& c = model.components[j];
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += (x[i] - model.mean[i]) * c[i];
        }
        coef[j] = acc;
    }
    return coef;
}

std::vector<double> reconstruct(const EigenshapeModel& model, std::span<const double> x,
                                int n_components) {
    const auto coef = project(model, x, n_components);
    std::vector<double> r = model.mean;
    for (std::size_t j = 0; j < coef.size(); ++j) {
        const auto& c = model.components[j];
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] += coef[j] * c[i];
        }
    }
    return r;
}

BinaryShape denoise_eigenshape(const EigenshapeModel& model, const BinaryShape& noisy,
                               int n_components, double threshold) {
    if (noisy.width() != model.canvas || noisy.height() != model.canvas) {
        throw ShapeError("denoise_eigenshape: shape is " + std::to_string(noisy.width()) + "x" +
                         std::to_string(noisy.height()) + ", model canvas is " +
                         std::to_string(model.canvas));
    }
    if (n_components < 1) {
        throw ShapeError("denoise_eigenshape: n_components must be >= 1");
    }
    const auto x = vectorize(noisy);
    const auto r = reconstruct(model, x, n_components);
    std::vector<std::uint8_t> px(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        px[i] = r[i] >= threshold ? 1 : 0;
    }
    return BinaryShape(noisy.width(), noisy.height(), std::move(px));
}

void save_model(const EigenshapeModel& model, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw ShapeError("save_model: cannot open " + path.string() + " for writing");
    }
    os.write(kMagic.data(), kMagic.size());
    write_u32(os, static_cast<std::uint32_t>(model.canvas));
    write_u32(os, static_cast<std::uint32_t>(model.components.size()));
    for (double v : model.mean) {
        write_f64(os, v);
    }
    for (const auto& c : model.components) {
        for (double v : c) {
            write_f64(os, v);
        }
    }
    for (double v : model.variances) {
        write_f64(os, v);
    }
    if (!os) {
        throw ShapeError("save_model: write failed for " + path.string());
    }
}

EigenshapeModel load_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ShapeError("load_model: cannot open " + path.string());
    }
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) {
        throw ShapeError("load_model: " + path.string() + " is not an eigenshape model");
    }
    EigenshapeModel model;
    model.canvas = static_cast<int>(read_u32(is));
    const auto m = read_u32(is);
    if (!is || model.canvas <= 0 || model.canvas > 65535) {
        throw ShapeError("load_model: bad header in " + path.string());
    }
    const auto dim = static_cast<std::size_t>(model.canvas) * static_cast<std::size_t>(model.canvas);
    if (m > dim) {
        throw ShapeError("load_model: component count exceeds dimension in " + path.string());
    }
    model.mean.resize(dim);
    for (auto& v : model.mean) {
        v = read_f64(is);
    }
    model.components.assign(m, std::vector<double>(dim));
    for (auto& c : model.components) {
        for (auto& v : c) {
            v = read_f64(is);
        }
    }
    model.variances.resize(m);
    for (auto& v : model.variances) {
        v = read_f64(is);
    }
    if (!is) {
        throw ShapeError("load_model: truncated file " + path.string());
    }
    if (is.peek() != std::char_traits<char>::eof()) {
        throw ShapeError("load_model: trailing bytes in " + path.string());
    }
    return model;
}

}  // namespace shapebench
