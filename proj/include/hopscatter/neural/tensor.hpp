#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hopscatter::neural {

/// Dense row-major tensor of 64-bit reals. Rank 1..3 is what the layers use;
/// rank-2 tensors are (rows x cols).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::size_t rows() const;
    std::size_t cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void fill(double v);
    void check_finite(const std::string& label) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    std::string shape_str() const;

private:
    std::vector<std::size_t> shape_;
    std::size_t cols_ = 0;  // stride of the last dimension's parent, cached
    std::vector<double> data_;
};

// Elementwise and matrix helpers. Shape mismatches throw std::invalid_argument.
Tensor matmul(const Tensor& a, const Tensor& b);            // (m x k)(k x n)
Tensor matmul_transpose_a(const Tensor& a, const Tensor& b);  // a^T b, a is (k x m)
Tensor matmul_transpose_b(const Tensor& a, const Tensor& b);  // a b^T, b is (n x k)
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
void add_inplace(Tensor& a, const Tensor& b);

/// Adds a length-n bias row to every row of a (rows x n).
Tensor add_row_bias(const Tensor& a, const Tensor& bias);

/// Sums a (rows x n) over rows into a length-n vector.
Tensor column_sums(const Tensor& a);

}  // namespace hopscatter::neural
