#include "evolab/core/tensor.hpp"

#include <sstream>

namespace evolab {

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (numel_of(shape) != data.size()) {
        throw DimensionError("tensor shape " + shape_str(shape) + " does not match value count " +
                             std::to_string(data.size()));
    }
}

Tensor Tensor::full(Shape s, double value) {
    Tensor t(std::move(s));
    std::fill(t.data.begin(), t.data.end(), value);
    return t;
}

Tensor Tensor::from(Shape s, std::initializer_list<double> values) {
    return Tensor(std::move(s), std::vector<double>(values));
}

std::size_t Tensor::dim(std::size_t i) const {
    if (i >= shape.size()) {
        throw IndexError("dimension index " + std::to_string(i) + " out of range for rank " +
                         std::to_string(shape.size()));
    }
    return shape[i];
}

static std::size_t flat_index(const Shape& shape, std::initializer_list<std::size_t> idx) {
    if (idx.size() != shape.size()) {
        throw IndexError("index rank " + std::to_string(idx.size()) + " does not match tensor rank " +
                         std::to_string(shape.size()));
    }
    std::size_t flat = 0;
    std::size_t axis = 0;
    for (std::size_t i : idx) {
        if (i >= shape[axis]) {
            throw IndexError("index " + std::to_string(i) + " out of bounds for axis " +
                             std::to_string(axis) + " of " + shape_str(shape));
        }
        flat = flat * shape[axis] + i;
        ++axis;
    }
    return flat;
}

double& Tensor::at(std::initializer_list<std::size_t> idx) { return data[flat_index(shape, idx)]; }

double Tensor::at(std::initializer_list<std::size_t> idx) const { return data[flat_index(shape, idx)]; }

Tensor Tensor::reshaped(Shape new_shape) const {
    if (numel_of(new_shape) != data.size()) {
        throw DimensionError("cannot reshape " + shape_str(shape) + " to " + shape_str(new_shape));
    }
    Tensor t;
    t.shape = std::move(new_shape);
    t.data = data;
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(what) + ": shape mismatch " + shape_str(a.shape) + " vs " +
                             shape_str(b.shape));
    }
}

void require_shape(const Tensor& t, const Shape& expected, const char* what) {
    if (t.shape != expected) {
        throw DimensionError(std::string(what) + ": expected shape " + shape_str(expected) + ", got " +
                             shape_str(t.shape));
    }
}

}  // namespace evolab
