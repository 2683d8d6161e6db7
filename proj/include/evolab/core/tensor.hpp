#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "evolab/core/errors.hpp"

namespace evolab {

using Shape = std::vector<std::size_t>;

inline std::size_t numel_of(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_str(const Shape& shape);

// Dense row-major tensor of doubles. Plain value type: copy is deep,
// moves are cheap, no views or aliasing.
struct Tensor {
    Shape shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(Shape s) : shape(std::move(s)), data(numel_of(shape), 0.0) {}
    Tensor(Shape s, std::vector<double> d);

    static Tensor zeros(Shape s) { return Tensor(std::move(s)); }
    static Tensor full(Shape s, double value);
    static Tensor from(Shape s, std::initializer_list<double> values);

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t dim(std::size_t i) const;

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    double& at(std::initializer_list<std::size_t> idx);
    double at(std::initializer_list<std::size_t> idx) const;

    Tensor reshaped(Shape new_shape) const;

    bool all_finite() const;
};

void require_same_shape(const Tensor& a, const Tensor& b, const char* what);
void require_shape(const Tensor& t, const Shape& expected, const char* what);

}  // namespace evolab
