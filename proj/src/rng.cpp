#include "osim/rng.hpp"

namespace osim {

std::string_view stream_name(Stream s) {
    switch (s) {
    case Stream::Network: return "network";
    case Stream::Population: return "population";
    case Stream::Attempts: return "attempts";
    case Stream::Outcomes: return "outcomes";
    case Stream::Substitution: return "substitution";
    case Stream::Withdrawals: return "withdrawals";
    }
    return "?";
}

} // namespace osim
