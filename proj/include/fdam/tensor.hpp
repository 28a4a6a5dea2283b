#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace fdam {

using index_t = std::int64_t;
using cdouble = std::complex<double>;

[[noreturn]] void throw_invalid(const std::string& msg);

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw_invalid(msg);
}

// Number of elements implied by a shape; throws on negative extents.
index_t shape_numel(const std::vector<index_t>& shape);

// Dense row-major tensor of doubles. Rank and extents are dynamic; all
// numerics in this project flow through this type or its complex sibling.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<index_t> shape);
    Tensor(std::vector<index_t> shape, std::vector<double> data);

    static Tensor full(std::vector<index_t> shape, double value);

    const std::vector<index_t>& shape() const { return shape_; }
    index_t rank() const { return static_cast<index_t>(shape_.size()); }
    index_t dim(std::size_t axis) const { return shape_[axis]; }
    index_t numel() const { return static_cast<index_t>(data_.size()); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    double& operator[](index_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](index_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& operator()(index_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator()(index_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& operator()(index_t i, index_t j) {
        return data_[static_cast<std::size_t>(i * shape_[1] + j)];
    }
    double operator()(index_t i, index_t j) const {
        return data_[static_cast<std::size_t>(i * shape_[1] + j)];
    }
    double& operator()(index_t i, index_t j, index_t k) {
        return data_[static_cast<std::size_t>((i * shape_[1] + j) * shape_[2] + k)];
    }
    double operator()(index_t i, index_t j, index_t k) const {
        return data_[static_cast<std::size_t>((i * shape_[1] + j) * shape_[2] + k)];
    }
    double& operator()(index_t i, index_t j, index_t k, index_t l) {
        return data_[static_cast<std::size_t>(((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
    }
    double operator()(index_t i, index_t j, index_t k, index_t l) const {
        return data_[static_cast<std::size_t>(((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;

private:
    std::vector<index_t> shape_;
    std::vector<double> data_;
};

// Dense row-major tensor of complex doubles.
class ComplexTensor {
public:
    ComplexTensor() = default;
    explicit ComplexTensor(std::vector<index_t> shape);
    ComplexTensor(std::vector<index_t> shape, std::vector<cdouble> data);

    const std::vector<index_t>& shape() const { return shape_; }
    index_t rank() const { return static_cast<index_t>(shape_.size()); }
    index_t dim(std::size_t axis) const { return shape_[axis]; }
    index_t numel() const { return static_cast<index_t>(data_.size()); }

    cdouble* data() { return data_.data(); }
    const cdouble* data() const { return data_.data(); }

    cdouble& operator[](index_t i) { return data_[static_cast<std::size_t>(i)]; }
    const cdouble& operator[](index_t i) const { return data_[static_cast<std::size_t>(i)]; }

    cdouble& operator()(index_t i, index_t j) {
        return data_[static_cast<std::size_t>(i * shape_[1] + j)];
    }
    const cdouble& operator()(index_t i, index_t j) const {
        return data_[static_cast<std::size_t>(i * shape_[1] + j)];
    }

    bool same_shape(const ComplexTensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;

    // Real part as a Tensor; max_imag (when non-null) receives max |imag|.
    Tensor real(double* max_imag = nullptr) const;

private:
    std::vector<index_t> shape_;
    std::vector<cdouble> data_;
};

// 64-bit seed; identical seed + identical config must reproduce experiments
// bit-exactly.
struct Seed {
    std::uint64_t value = 0;
};

void add_inplace(Tensor& dst, const Tensor& src);
Tensor scaled(const Tensor& t, double factor);
double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);
double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b);

}  // namespace fdam
