#include "fdam/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fdam {

void throw_invalid(const std::string& msg) {
    throw std::invalid_argument(msg);
}

index_t shape_numel(const std::vector<index_t>& shape) {
    index_t n = 1;
    for (index_t e : shape) {
        require(e >= 0, "tensor extent must be nonnegative");
        n *= e;
    }
    return n;
}

Tensor::Tensor(std::vector<index_t> shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_numel(shape_)), 0.0) {}

Tensor::Tensor(std::vector<index_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    require(shape_numel(shape_) == static_cast<index_t>(data_.size()),
            "tensor data length does not match shape");
}

Tensor Tensor::full(std::vector<index_t> shape, double value) {
    Tensor t(std::move(shape));
    for (double& v : t.data_) v = value;
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

ComplexTensor::ComplexTensor(std::vector<index_t> shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_numel(shape_)), cdouble{0.0, 0.0}) {}

ComplexTensor::ComplexTensor(std::vector<index_t> shape, std::vector<cdouble> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    require(shape_numel(shape_) == static_cast<index_t>(data_.size()),
            "tensor data length does not match shape");
}

bool ComplexTensor::all_finite() const {
    for (const cdouble& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

Tensor ComplexTensor::real(double* max_imag) const {
    Tensor out(shape_);
    double worst = 0.0;
    for (index_t i = 0; i < numel(); ++i) {
        out[i] = data_[static_cast<std::size_t>(i)].real();
        worst = std::max(worst, std::abs(data_[static_cast<std::size_t>(i)].imag()));
    }
    if (max_imag) *max_imag = worst;
    return out;
}

void add_inplace(Tensor& dst, const Tensor& src) {
    require(dst.same_shape(src), "add_inplace: shape mismatch");
    for (index_t i = 0; i < dst.numel(); ++i) dst[i] += src[i];
}

Tensor scaled(const Tensor& t, double factor) {
    Tensor out(t.shape());
    for (index_t i = 0; i < t.numel(); ++i) out[i] = t[i] * factor;
    return out;
}

double max_abs(const Tensor& t) {
    double m = 0.0;
    for (index_t i = 0; i < t.numel(); ++i) m = std::max(m, std::abs(t[i]));
    return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    require(a.same_shape(b), "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (index_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b) {
    require(a.same_shape(b), "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (index_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace fdam
