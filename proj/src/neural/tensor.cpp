#include "hopscatter/neural/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hopscatter::neural {

namespace {
std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) {
            throw std::invalid_argument("Tensor: zero-sized dimension");
        }
        n *= d;
    }
    return n;
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    if (shape_.empty()) {
        throw std::invalid_argument("Tensor: rank must be >= 1");
    }
    data_.assign(shape_product(shape_), 0.0);
    cols_ = shape_.back();
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) {
        throw std::invalid_argument("Tensor: rank must be >= 1");
    }
    if (data_.size() != shape_product(shape_)) {
        throw std::invalid_argument("Tensor: data length does not match shape");
    }
    cols_ = shape_.back();
}

std::size_t Tensor::rows() const {
    if (rank() != 2) {
        throw std::logic_error("Tensor::rows: tensor is not rank-2 (shape " + shape_str() + ")");
    }
    return shape_[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) {
        throw std::logic_error("Tensor::cols: tensor is not rank-2 (shape " + shape_str() + ")");
    }
    return shape_[1];
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

void Tensor::check_finite(const std::string& label) const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite value in " + label);
        }
    }
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        os << shape_[i] << (i + 1 < shape_.size() ? "," : "");
    }
    os << ')';
    return os.str();
}

namespace {
void require_rank2(const Tensor& t, const char* who) {
    if (t.rank() != 2) {
        throw std::invalid_argument(std::string(who) + ": rank-2 tensor required, got " + t.shape_str());
    }
}
}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != k) {
        throw std::invalid_argument("matmul: inner dimensions disagree: " + a.shape_str() + " x " +
                                    b.shape_str());
    }
    Tensor c({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.data() + i * k;
        double* crow = c.data() + i * n;
        for (std::size_t j = 0; j < k; ++j) {
            const double av = arow[j];
            if (av == 0.0) continue;
            const double* brow = b.data() + j * n;
            for (std::size_t l = 0; l < n; ++l) {
                crow[l] += av * brow[l];
            }
        }
    }
    return c;
}

Tensor matmul_transpose_a(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_transpose_a");
    require_rank2(b, "matmul_transpose_a");
    const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
    if (b.rows() != k) {
        throw std::invalid_argument("matmul_transpose_a: dimensions disagree: " + a.shape_str() +
                                    "^T x " + b.shape_str());
    }
    Tensor c({m, n});
    for (std::size_t j = 0; j < k; ++j) {
        const double* arow = a.data() + j * m;
        const double* brow = b.data() + j * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* crow = c.data() + i * n;
            for (std::size_t l = 0; l < n; ++l) {
                crow[l] += av * brow[l];
            }
        }
    }
    return c;
}

Tensor matmul_transpose_b(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_transpose_b");
    require_rank2(b, "matmul_transpose_b");
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    if (b.cols() != k) {
        throw std::invalid_argument("matmul_transpose_b: dimensions disagree: " + a.shape_str() +
                                    " x " + b.shape_str() + "^T");
    }
    Tensor c({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.data() + i * k;
        double* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b.data() + j * k;
            double sum = 0.0;
            for (std::size_t l = 0; l < k; ++l) {
                sum += arow[l] * brow[l];
            }
            crow[j] = sum;
        }
    }
    return c;
}

Tensor transpose(const Tensor& a) {
    require_rank2(a, "transpose");
    Tensor t({a.cols(), a.rows()});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t.at(j, i) = a.at(i, j);
        }
    }
    return t;
}

namespace {
void require_same_shape(const Tensor& a, const Tensor& b, const char* who) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(who) + ": shape mismatch " + a.shape_str() + " vs " +
                                    b.shape_str());
    }
}
}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    Tensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    Tensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
    return c;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "hadamard");
    Tensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= b[i];
    return c;
}

Tensor scale(const Tensor& a, double s) {
    Tensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= s;
    return c;
}

void add_inplace(Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add_inplace");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

Tensor add_row_bias(const Tensor& a, const Tensor& bias) {
    require_rank2(a, "add_row_bias");
    if (bias.rank() != 1 || bias.size() != a.cols()) {
        throw std::invalid_argument("add_row_bias: bias shape " + bias.shape_str() +
                                    " does not match " + a.shape_str());
    }
    Tensor c = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c.at(i, j) += bias[j];
        }
    }
    return c;
}

Tensor column_sums(const Tensor& a) {
    require_rank2(a, "column_sums");
    Tensor s({a.cols()});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s[j] += a.at(i, j);
        }
    }
    return s;
}

}  // namespace hopscatter::neural
