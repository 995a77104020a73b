#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmcqoi {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(shape[i]);
    }
    return out + ")";
}

// Multi-index as a string, 1-based, for error messages.
inline std::string index_str(const Shape& shape, std::size_t flat) {
    std::string out = "(";
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t i = shape.size(); i-- > 0;) {
        idx[i] = flat % shape[i];
        flat /= shape[i];
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(idx[i] + 1);
    }
    return out + ")";
}

// Dense multi-dimensional array of reals, row-major flat storage.
class MultiArray {
public:
    MultiArray() = default;
    explicit MultiArray(Shape shape, double fill = 0.0)
        : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    Shape shape_;
    std::vector<double> data_;
};

// Multi-dimensional array of booleans (stopping flags).
class FlagArray {
public:
    FlagArray() = default;
    explicit FlagArray(Shape shape, bool fill = false)
        : shape_(std::move(shape)), data_(shape_size(shape_), fill ? 1 : 0) {}

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    bool get(std::size_t i) const { return data_[i] != 0; }
    void set(std::size_t i, bool v) { data_[i] = v ? 1 : 0; }

    bool all() const {
        for (char c : data_) if (!c) return false;
        return true;
    }
    bool any() const {
        for (char c : data_) if (c) return true;
        return false;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (char c : data_) n += (c != 0);
        return n;
    }
    bool operator==(const FlagArray& o) const {
        return shape_ == o.shape_ && data_ == o.data_;
    }

private:
    Shape shape_;
    std::vector<char> data_;
};

// Pair of arrays with lo <= hi elementwise; entries may be +-inf, never NaN.
class BoundsArray {
public:
    BoundsArray() = default;
    explicit BoundsArray(const Shape& shape)
        : lo_(shape, -std::numeric_limits<double>::infinity()),
          hi_(shape, std::numeric_limits<double>::infinity()) {}
    BoundsArray(MultiArray lo, MultiArray hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        validate();
    }

    const Shape& shape() const { return lo_.shape(); }
    std::size_t size() const { return lo_.size(); }
    MultiArray& lo() { return lo_; }
    MultiArray& hi() { return hi_; }
    const MultiArray& lo() const { return lo_; }
    const MultiArray& hi() const { return hi_; }

    void validate() const {
        if (lo_.shape() != hi_.shape())
            throw std::invalid_argument("BoundsArray: lo/hi shape mismatch");
        for (std::size_t i = 0; i < lo_.size(); ++i) {
            if (std::isnan(lo_[i]) || std::isnan(hi_[i]))
                throw std::invalid_argument("BoundsArray: NaN endpoint at index " +
                                            index_str(lo_.shape(), i));
            if (lo_[i] > hi_[i])
                throw std::invalid_argument("BoundsArray: lo > hi at index " +
                                            index_str(lo_.shape(), i));
        }
    }

private:
    MultiArray lo_, hi_;
};

} // namespace qmcqoi
