#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mbgk {

/// Values of one species' distribution over spatial cells x velocity nodes, cell-major.
class PhaseField {
public:
    PhaseField() = default;
    PhaseField(std::size_t cells, std::size_t nodes, double value = 0.0)
        : cells_(cells), nodes_(nodes), data_(cells * nodes, value) {}

    std::size_t cells() const noexcept { return cells_; }
    std::size_t nodes() const noexcept { return nodes_; }
    std::span<double> cell(std::size_t k) { return {data_.data() + k * nodes_, nodes_}; }
    std::span<const double> cell(std::size_t k) const { return {data_.data() + k * nodes_, nodes_}; }
    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const PhaseField&) const = default;

private:
    std::size_t cells_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

}  // namespace mbgk
