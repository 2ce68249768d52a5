#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hbtp {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic RNG with portable bounded sampling. std:: distributions are
// implementation-defined, which would break golden files across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x5851f42d4c957f2dull)) {
        if (state_ == 0) state_ = 0x9e3779b97f4a7c15ull;
    }

    uint64_t next() {
        uint64_t x = state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        return state_ = x;
    }

    // uniform in [0, n)
    uint64_t bounded(uint64_t n) {
        if (n == 0) return 0;
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double uniform01() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(bounded(v.size()))];
    }

private:
    uint64_t state_;
};

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
    return h ^ (splitmix64(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            auto piece = trim(s.substr(start, i - start));
            if (!piece.empty()) out.emplace_back(piece);
            start = i + 1;
        }
    }
    return out;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline size_t levenshtein(std::string_view a, std::string_view b) {
    std::vector<size_t> row(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        size_t diag = row[0];
        row[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            size_t next = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = row[j];
            row[j] = next;
        }
    }
    return row[b.size()];
}

}  // namespace hbtp
