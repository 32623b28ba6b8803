#include "hopscatter/rfsim/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hopscatter/core/rng.hpp"

namespace hopscatter::rfsim {

void ChannelPlan::validate() const {
    if (count < 1) {
        throw std::invalid_argument("ChannelPlan: count must be >= 1");
    }
    if (!(spacing_hz > 0.0)) {
        throw std::invalid_argument("ChannelPlan: spacing must be positive");
    }
    if (!(base_hz > 0.0)) {
        throw std::invalid_argument("ChannelPlan: base frequency must be positive");
    }
}

double channel_frequency(const ChannelPlan& plan, std::size_t idx) {
    plan.validate();
    if (idx >= plan.count) {
        throw std::out_of_range("channel_frequency: channel index " + std::to_string(idx) +
                                " out of range (count " + std::to_string(plan.count) + ")");
    }
    return plan.base_hz + static_cast<double>(idx) * plan.spacing_hz;
}

HopSchedule::HopSchedule(std::uint64_t seed, ChannelPlan plan, double slot_duration_s)
    : seed_(seed), plan_(plan), slot_duration_(slot_duration_s) {
    plan_.validate();
    if (!(slot_duration_ > 0.0)) {
        throw std::invalid_argument("HopSchedule: slot duration must be positive");
    }
}

const std::vector<std::size_t>& HopSchedule::block(std::uint64_t block_index) const {
    if (block_index >= blocks_.size()) {
        blocks_.resize(block_index + 1);
    }
    auto& b = blocks_[block_index];
    if (b.empty()) {
        b.resize(plan_.count);
        std::iota(b.begin(), b.end(), std::size_t{0});
        core::CounterRng rng(seed_, "hop-block", block_index);
        rng.shuffle(b);
    }
    return b;
}

std::size_t HopSchedule::channel_at(std::uint64_t slot) const {
    const std::uint64_t block_index = slot / plan_.count;
    const std::size_t pos = static_cast<std::size_t>(slot % plan_.count);
    return block(block_index)[pos];
}

double HopSchedule::frequency_at(std::uint64_t slot) const {
    return channel_frequency(plan_, channel_at(slot));
}

std::uint64_t HopSchedule::slot_of(double t) const {
    if (t < 0.0) {
        throw std::invalid_argument("HopSchedule::slot_of: negative time");
    }
    // Small forward bias so reads landing on a slot boundary go to the new slot.
    return static_cast<std::uint64_t>(std::floor(t / slot_duration_ + 1e-9));
}

HopSchedule make_hop_schedule(std::uint64_t seed, const ChannelPlan& plan, double slot_duration_s) {
    return HopSchedule(seed, plan, slot_duration_s);
}

}  // namespace hopscatter::rfsim
