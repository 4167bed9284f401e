#include "tecc/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace tecc {

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TECC_SCREEN_JOBS")) {
        const std::string_view text(env);
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
    }
    return 1;
}

}  // namespace tecc
