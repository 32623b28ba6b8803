#pragma once

#include <cstdint>
#include <vector>

namespace hopscatter::rfsim {

/// Evenly spaced hop channel set. Defaults follow the FCC UHF RFID convention:
/// 50 channels, 902.75 MHz base, 500 kHz spacing.
struct ChannelPlan {
    double base_hz = 902.75e6;
    double spacing_hz = 0.5e6;
    std::size_t count = 50;

    void validate() const;
};

/// Frequency of channel idx. Throws std::out_of_range for idx >= plan.count.
double channel_frequency(const ChannelPlan& plan, std::size_t idx);

/// Seeded slot -> channel mapping built from concatenated random permutations
/// of the channel set, so every aligned block of plan.count slots uses each
/// channel exactly once. Blocks are generated lazily and cached.
class HopSchedule {
public:
    HopSchedule(std::uint64_t seed, ChannelPlan plan, double slot_duration_s);

    std::size_t channel_at(std::uint64_t slot) const;
    double frequency_at(std::uint64_t slot) const;

    /// Slot index covering time t (seconds from schedule origin).
    std::uint64_t slot_of(double t) const;

    double slot_duration() const { return slot_duration_; }
    const ChannelPlan& plan() const { return plan_; }
    std::uint64_t seed() const { return seed_; }

private:
    const std::vector<std::size_t>& block(std::uint64_t block_index) const;

    std::uint64_t seed_ = 0;
    ChannelPlan plan_;
    double slot_duration_ = 0.02;
    mutable std::vector<std::vector<std::size_t>> blocks_;
};

HopSchedule make_hop_schedule(std::uint64_t seed, const ChannelPlan& plan, double slot_duration_s);

}  // namespace hopscatter::rfsim
