#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "socnet/error.hpp"

namespace socnet {

using Timestamp = std::int64_t;  // seconds since epoch, UTC
using EntityId = std::string;
using NodeIndex = std::uint32_t;

enum class InteractionKind { Call, Sms, Comment };

std::string_view to_string(InteractionKind kind);
InteractionKind parse_interaction_kind(std::string_view text);

// Half-open interval [start, end).
class TimeWindow {
public:
    TimeWindow(Timestamp start, Timestamp end) : start_(start), end_(end) {
        if (!(start < end)) {
            throw ValidationError("time window requires start < end (got [" + std::to_string(start) + ", " +
                                  std::to_string(end) + "))");
        }
    }

    Timestamp start() const noexcept { return start_; }
    Timestamp end() const noexcept { return end_; }
    Timestamp width() const noexcept { return end_ - start_; }
    bool contains(Timestamp t) const noexcept { return t >= start_ && t < end_; }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

private:
    Timestamp start_;
    Timestamp end_;
};

struct Interaction {
    EntityId src;
    EntityId dst;
    Timestamp timestamp = 0;
    InteractionKind kind = InteractionKind::Call;
    double duration = 0.0;
    std::map<std::string, std::string> meta;

    friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Throws ValidationError describing the first violated invariant.
void validate(const Interaction& interaction);

}  // namespace socnet
