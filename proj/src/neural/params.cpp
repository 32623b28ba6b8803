#include "hopscatter/neural/params.hpp"

#include <stdexcept>

namespace hopscatter::neural {

Tensor& ParamStore::create(const std::string& name, std::vector<std::size_t> shape) {
    if (entries_.count(name)) {
        throw std::invalid_argument("ParamStore: duplicate parameter '" + name + "'");
    }
    Entry e;
    e.value = Tensor(shape);
    e.grad = Tensor(std::move(shape));
    auto [it, _] = entries_.emplace(name, std::move(e));
    return it->second.value;
}

Tensor& ParamStore::param(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw std::out_of_range("ParamStore: no parameter '" + name + "'");
    }
    return it->second.value;
}

const Tensor& ParamStore::param(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw std::out_of_range("ParamStore: no parameter '" + name + "'");
    }
    return it->second.value;
}

Tensor& ParamStore::grad(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw std::out_of_range("ParamStore: no gradient slot '" + name + "'");
    }
    return it->second.grad;
}

const Tensor& ParamStore::grad(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw std::out_of_range("ParamStore: no gradient slot '" + name + "'");
    }
    return it->second.grad;
}

void ParamStore::zero_grads() {
    for (auto& [_, e] : entries_) {
        e.grad.fill(0.0);
    }
}

std::vector<std::string> ParamStore::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, _] : entries_) {
        out.push_back(name);
    }
    return out;
}

std::size_t ParamStore::total_size() const {
    std::size_t n = 0;
    for (const auto& [_, e] : entries_) {
        n += e.value.size();
    }
    return n;
}

}  // namespace hopscatter::neural
