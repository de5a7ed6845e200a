#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fmpc {

// Phases order the events inside a round: peeked values are always recorded
// before corrupt responses (the rushing contract is visible in transcripts).
enum class Phase : uint8_t {
    Input = 0,
    Peek = 1,
    Abort = 2,
    Main = 3,
    Broadcast = 4,
    Hybrid = 5,
    Premature = 6,
    Deliver = 7,
};

const char* phase_name(Phase p);

struct TranscriptEvent {
    int round = 0; // 0 for preprocessing / preliminary phase
    Phase phase = Phase::Input;
    std::string actor;
    std::string payload; // hexadecimal or short token
};

class Transcript {
public:
    void record(int round, Phase phase, std::string actor, std::string payload);
    const std::vector<TranscriptEvent>& events() const { return events_; }

    // One event per line: "round phase actor payload".
    void serialize(std::ostream& out) const;
    std::string serialize() const;

private:
    std::vector<TranscriptEvent> events_;
};

} // namespace fmpc
