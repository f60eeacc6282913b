#include "trapwalk/random.hpp"

namespace trapwalk {

std::uint64_t mix64(std::uint64_t x)
{
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag)
{
    std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (index * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ (tag * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL));
    return h;
}

}  // namespace trapwalk
