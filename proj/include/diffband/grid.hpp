#ifndef DIFFBAND_GRID_HPP
#define DIFFBAND_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace diffband {

/// Dense row-major 2-D array; row index follows the reference, column the query.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return cells_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return cells_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {cells_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {cells_.data() + r * cols_, cols_}; }
    std::span<const T> cells() const noexcept { return cells_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> cells_;
};

}  // namespace diffband

#endif
