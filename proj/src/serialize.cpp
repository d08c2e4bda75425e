#include "hghz/serialize.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hghz {

namespace {

constexpr char kMagic[5] = {'H', 'G', 'H', 'Z', '1'};

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_i64(std::string& out, int64_t v) { put_u64(out, static_cast<uint64_t>(v)); }
void put_f64(std::string& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

struct Reader {
    const std::string& s;
    size_t pos = 0;
    uint64_t u64() {
        if (pos + 8 > s.size()) throw std::invalid_argument("container truncated");
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(static_cast<uint8_t>(s[pos + static_cast<size_t>(i)]))
                 << (8 * i);
        pos += 8;
        return v;
    }
    int64_t i64() { return static_cast<int64_t>(u64()); }
    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    uint8_t byte() {
        if (pos >= s.size()) throw std::invalid_argument("container truncated");
        return static_cast<uint8_t>(s[pos++]);
    }
};

void put_header(std::string& out, uint8_t kind, const Params& p) {
    out.append(kMagic, 5);
    out.push_back(static_cast<char>(kind));
    out.push_back(static_cast<char>(p.regime == Regime::Toy ? 0 : 1));
    out.push_back(0); // reserved
    put_u64(out, p.k);
    put_u64(out, p.N);
    put_u64(out, p.n);
    put_u64(out, p.mu);
    put_f64(out, p.alpha_q);
    put_f64(out, p.r_max);
    put_f64(out, p.r_safe);
}

Params read_header(Reader& r, uint8_t expect_kind) {
    if (r.s.size() < 8 || std::memcmp(r.s.data(), kMagic, 5) != 0)
        throw std::invalid_argument("bad magic");
    r.pos = 5;
    uint8_t kind = r.byte();
    if (kind != expect_kind) throw std::invalid_argument("wrong container kind");
    uint8_t regime = r.byte();
    r.byte();
    Params p;
    p.k = static_cast<uint32_t>(r.u64());
    p.N = r.u64();
    p.n = r.u64();
    p.mu = r.u64();
    p.alpha_q = r.f64();
    p.r_max = r.f64();
    p.r_safe = r.f64();
    p.regime = regime == 0 ? Regime::Toy : Regime::Secure;
    if (p.k < 1 || p.k > 62 || p.N == 0 || p.n == 0)
        throw std::invalid_argument("bad header fields");
    return p;
}

} // namespace

std::string serialize_key(const HghzKey& k) {
    std::string out;
    put_header(out, 0, k.p);
    for (uint64_t v : k.A.data) put_u64(out, v);
    for (uint64_t v : k.y0) put_u64(out, v);
    return out;
}

std::string serialize_trapdoor(const HghzTrapdoor& t) {
    std::string out;
    put_header(out, 1, t.p);
    for (int64_t v : t.R.data) put_i64(out, v);
    for (uint8_t b : t.d0) out.push_back(static_cast<char>(b));
    for (uint64_t v : t.s0) put_u64(out, v);
    for (uint64_t v : t.e0) put_u64(out, v);
    for (uint64_t v : t.A.data) put_u64(out, v);
    return out;
}

HghzKey parse_key(const std::string& bytes) {
    Reader r{bytes};
    HghzKey k;
    k.p = read_header(r, 0);
    uint64_t rows = k.p.M() + k.p.n;
    k.A = ZqMatrix(rows, k.p.N);
    uint64_t q = k.p.q().q;
    for (auto& v : k.A.data) {
        v = r.u64();
        if (v >= q) throw std::invalid_argument("residue out of range");
    }
    k.y0.resize(rows);
    for (auto& v : k.y0) {
        v = r.u64();
        if (v >= q) throw std::invalid_argument("residue out of range");
    }
    if (r.pos != bytes.size()) throw std::invalid_argument("trailing bytes");
    return k;
}

HghzTrapdoor parse_trapdoor(const std::string& bytes) {
    Reader r{bytes};
    HghzTrapdoor t;
    t.p = read_header(r, 1);
    uint64_t q = t.p.q().q;
    t.R = IntMatrix(t.p.N * t.p.k, 2 * t.p.N);
    for (auto& v : t.R.data) v = r.i64();
    t.d0.resize(t.p.n);
    for (auto& b : t.d0) {
        b = r.byte();
        if (b > 1) throw std::invalid_argument("bad d0 bit");
    }
    t.s0.resize(t.p.N);
    for (auto& v : t.s0) {
        v = r.u64();
        if (v >= q) throw std::invalid_argument("residue out of range");
    }
    t.e0.resize(t.p.M() + t.p.n);
    for (auto& v : t.e0) {
        v = r.u64();
        if (v >= q) throw std::invalid_argument("residue out of range");
    }
    t.A = ZqMatrix(t.p.M() + t.p.n, t.p.N);
    for (auto& v : t.A.data) {
        v = r.u64();
        if (v >= q) throw std::invalid_argument("residue out of range");
    }
    if (r.pos != bytes.size()) throw std::invalid_argument("trailing bytes");
    return t;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

} // namespace hghz
