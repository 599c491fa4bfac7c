#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epo {

// Dense row-major [paths x nodes] storage for per-scenario processes.
class PathMatrix {
public:
    PathMatrix() = default;
    PathMatrix(std::size_t paths, std::size_t nodes, double fill = 0.0)
        : paths_(paths), nodes_(nodes), data_(paths * nodes, fill) {}

    std::size_t paths() const { return paths_; }
    std::size_t nodes() const { return nodes_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t path, std::size_t node) { return data_[path * nodes_ + node]; }
    double operator()(std::size_t path, std::size_t node) const { return data_[path * nodes_ + node]; }

    double* row(std::size_t path) { return data_.data() + path * nodes_; }
    const double* row(std::size_t path) const { return data_.data() + path * nodes_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const PathMatrix& other) const {
        return paths_ == other.paths_ && nodes_ == other.nodes_;
    }

    void require_shape(std::size_t paths, std::size_t nodes, const char* what) const {
        if (paths_ != paths || nodes_ != nodes)
            throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }

private:
    std::size_t paths_ = 0;
    std::size_t nodes_ = 0;
    std::vector<double> data_;
};

} // namespace epo
