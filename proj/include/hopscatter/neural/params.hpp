#pragma once

#include <map>
#include <string>
#include <vector>

#include "hopscatter/neural/tensor.hpp"

namespace hopscatter::neural {

/// Named parameter tensors with matching gradient slots. Names are unique;
/// iteration order is lexicographic, so checkpoints and updates are
/// deterministic.
class ParamStore {
public:
    Tensor& create(const std::string& name, std::vector<std::size_t> shape);

    bool has(const std::string& name) const { return entries_.count(name) != 0; }

    Tensor& param(const std::string& name);
    const Tensor& param(const std::string& name) const;
    Tensor& grad(const std::string& name);
    const Tensor& grad(const std::string& name) const;

    void zero_grads();

    std::vector<std::string> names() const;
    std::size_t tensor_count() const { return entries_.size(); }
    std::size_t total_size() const;

    template <typename Fn>
    void for_each(Fn&& fn) {  // fn(name, param, grad)
        for (auto& [name, e] : entries_) {
            fn(name, e.value, e.grad);
        }
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const auto& [name, e] : entries_) {
            fn(name, e.value, e.grad);
        }
    }

private:
    struct Entry {
        Tensor value;
        Tensor grad;
    };
    std::map<std::string, Entry> entries_;
};

}  // namespace hopscatter::neural
