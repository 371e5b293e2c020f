#ifndef CANLINK_VARTABLE_HPP
#define CANLINK_VARTABLE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "canlink/errors.hpp"

namespace canlink {

// A weighting assigns a non-negative integer weight per variable. Table
// default weights are >= 1; explicit weightings may use 0 (symbolic scalar
// parameters carry declared degree 0).
using Weighting = std::vector<std::int64_t>;

// Ordered table of distinct variable names with default positive weights.
// Immutable; shared by every Poly built over it.
class VarTable {
  public:
    static std::shared_ptr<const VarTable> make(std::vector<std::string> names) {
        return make(std::move(names), {});
    }
    static std::shared_ptr<const VarTable> make(std::vector<std::string> names,
                                                Weighting weights) {
        return std::shared_ptr<const VarTable>(new VarTable(std::move(names), std::move(weights)));
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::int64_t weight(std::size_t i) const { return weights_.at(i); }
    const Weighting& weights() const { return weights_; }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index_of(const std::string& name) const {
        auto i = find(name);
        if (!i) throw PreconditionError("unknown variable: " + name);
        return *i;
    }

    bool same_as(const VarTable& o) const {
        return this == &o || (names_ == o.names_ && weights_ == o.weights_);
    }

  private:
    VarTable(std::vector<std::string> names, Weighting weights)
        : names_(std::move(names)), weights_(std::move(weights)) {
        if (weights_.empty()) weights_.assign(names_.size(), 1);
        if (weights_.size() != names_.size())
            throw PreconditionError("weight list does not match variable count");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (weights_[i] < 1) throw PreconditionError("table weight must be >= 1");
            if (names_[i].empty()) throw PreconditionError("empty variable name");
            if (!index_.emplace(names_[i], i).second)
                throw PreconditionError("duplicate variable name: " + names_[i]);
        }
    }

    std::vector<std::string> names_;
    Weighting weights_;
    std::map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const VarTable>;

} // namespace canlink

#endif
