#include "fmpc/transcript.hpp"

#include <ostream>
#include <sstream>

namespace fmpc {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Input: return "input";
        case Phase::Peek: return "peek";
        case Phase::Abort: return "abort";
        case Phase::Main: return "main";
        case Phase::Broadcast: return "broadcast";
        case Phase::Hybrid: return "hybrid";
        case Phase::Premature: return "premature";
        case Phase::Deliver: return "deliver";
    }
    return "?";
}

void Transcript::record(int round, Phase phase, std::string actor, std::string payload) {
    events_.push_back({round, phase, std::move(actor), std::move(payload)});
}

void Transcript::serialize(std::ostream& out) const {
    for (const auto& e : events_) {
        out << e.round << ' ' << phase_name(e.phase) << ' ' << e.actor << ' ' << e.payload
            << '\n';
    }
}

std::string Transcript::serialize() const {
    std::ostringstream out;
    serialize(out);
    return out.str();
}

} // namespace fmpc
