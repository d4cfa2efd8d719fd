#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "renyilab/errors.hpp"

namespace renyi {

// Ordered list of tensor factors. The factor order is fixed once and for all:
// partial traces and embeddings never reorder the remaining labels, so kron
// layouts are reproducible bit-exactly.
struct SubsystemShape {
    std::vector<int> dims;
    std::vector<std::string> labels;

    SubsystemShape() = default;

    SubsystemShape(std::vector<int> d, std::vector<std::string> l)
        : dims(std::move(d)), labels(std::move(l)) {
        if (dims.size() != labels.size())
            throw ShapeMismatch("shape: dims/labels size mismatch");
        for (int di : dims)
            if (di <= 0) throw ShapeMismatch("shape: nonpositive dimension");
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw ShapeMismatch("shape: duplicate label '" + labels[i] + "'");
    }

    static SubsystemShape single(int dim, const std::string& label = "S") {
        return SubsystemShape({dim}, {label});
    }

    int factor_count() const { return static_cast<int>(dims.size()); }

    long total_dim() const {
        long d = 1;
        for (int di : dims) d *= di;
        return d;
    }

    bool has_label(const std::string& l) const {
        return std::find(labels.begin(), labels.end(), l) != labels.end();
    }

    int position(const std::string& l) const {
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end())
            throw ShapeMismatch("shape: unknown label '" + l + "'");
        return static_cast<int>(it - labels.begin());
    }

    int dim_of(const std::string& l) const { return dims[position(l)]; }

    long dim_of_set(const std::vector<std::string>& ls) const {
        long d = 1;
        for (const auto& l : ls) d *= dim_of(l);
        return d;
    }

    // Sub-shape on a subset of labels, preserving the original factor order.
    SubsystemShape subshape(const std::vector<std::string>& keep) const {
        for (const auto& l : keep) (void)position(l);
        std::vector<int> d;
        std::vector<std::string> ls;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (std::find(keep.begin(), keep.end(), labels[i]) != keep.end()) {
                d.push_back(dims[i]);
                ls.push_back(labels[i]);
            }
        }
        return SubsystemShape(std::move(d), std::move(ls));
    }

    std::vector<std::string> complement(const std::vector<std::string>& drop) const {
        std::vector<std::string> keep;
        for (const auto& l : labels)
            if (std::find(drop.begin(), drop.end(), l) == drop.end()) keep.push_back(l);
        return keep;
    }

    SubsystemShape tensor_with(const SubsystemShape& other) const {
        std::vector<int> d = dims;
        std::vector<std::string> ls = labels;
        d.insert(d.end(), other.dims.begin(), other.dims.end());
        ls.insert(ls.end(), other.labels.begin(), other.labels.end());
        return SubsystemShape(std::move(d), std::move(ls));
    }

    bool operator==(const SubsystemShape& other) const {
        return dims == other.dims && labels == other.labels;
    }
};

} // namespace renyi
