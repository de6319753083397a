#include "noon/serialize.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace noon {

json density_to_json(const DensityOp& rho) {
  const auto n = rho.space().dim();
  json re = json::array(), im = json::array();
  for (std::int64_t i = 0; i < n; ++i) {
    json row_re = json::array(), row_im = json::array();
    for (std::int64_t j = 0; j < n; ++j) {
      row_re.push_back(rho.matrix()(i, j).real());
      row_im.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return json{{"cutoff", rho.space().cutoff},
              {"mode_count", rho.space().modes},
              {"re", std::move(re)},
              {"im", std::move(im)}};
}

DensityOp density_from_json(const json& j) {
  FockSpace sp{j.at("mode_count").get<int>(), j.at("cutoff").get<int>()};
  const auto n = sp.dim();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<std::int64_t>(re.size()) != n || static_cast<std::int64_t>(im.size()) != n)
    throw ConfigError("density matrix dimensions do not match the space");
  MatC m(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t k = 0; k < n; ++k)
      m(i, k) = cd(re[i][k].get<double>(), im[i][k].get<double>());
  return DensityOp(sp, std::move(m));
}

json herald_to_json(const HeraldOutcome& h) {
  return json{{"probability", h.probability},
              {"null_herald", h.null_herald},
              {"state", h.null_herald ? json(nullptr) : density_to_json(h.state)}};
}

HeraldOutcome herald_from_json(const json& j) {
  HeraldOutcome h;
  h.probability = j.at("probability").get<double>();
  h.null_herald = j.at("null_herald").get<bool>();
  if (!h.null_herald) h.state = density_from_json(j.at("state"));
  return h;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

std::string dataset_to_csv(const QuadratureDataset& d) {
  std::ostringstream out;
  out << "mode_id,theta_rad,x\n";
  for (const auto& r : d.records)
    out << r.mode_id << ',' << format_double(r.theta) << ',' << format_double(r.x) << '\n';
  return out.str();
}

QuadratureDataset dataset_from_csv(const std::string& csv) {
  QuadratureDataset d;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("mode_id,", 0) != 0)
    throw ConfigError("bad dataset header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    QuadratureRecord r{};
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &r.mode_id, &r.theta, &r.x) != 3)
      throw ConfigError("bad dataset row: " + line);
    d.records.push_back(r);
  }
  return d;
}

std::string joint_dataset_to_csv(const JointQuadratureDataset& d) {
  std::ostringstream out;
  out << "theta_a_rad,x_a,theta_b_rad,x_b\n";
  for (const auto& r : d.records)
    out << format_double(r.theta_a) << ',' << format_double(r.x_a) << ','
        << format_double(r.theta_b) << ',' << format_double(r.x_b) << '\n';
  return out.str();
}

JointQuadratureDataset joint_dataset_from_csv(const std::string& csv) {
  JointQuadratureDataset d;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("theta_a_rad,", 0) != 0)
    throw ConfigError("bad joint dataset header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    JointQuadratureRecord r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.theta_a, &r.x_a, &r.theta_b, &r.x_b) != 4)
      throw ConfigError("bad joint dataset row: " + line);
    d.records.push_back(r);
  }
  return d;
}

// ---- SHA-256 (FIPS 180-4), compact implementation for output manifests ----

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string msg = bytes;
  const std::uint64_t bitlen = static_cast<std::uint64_t>(bytes.size()) * 8;
  msg.push_back(static_cast<char>(0x80));
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (8 * i)) & 0xff));

  std::array<std::uint32_t, 64> w{};
  for (std::size_t off = 0; off < msg.size(); off += 64) {
    for (int i = 0; i < 16; ++i)
      w[i] = (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i])) << 24) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 1])) << 16) |
             (static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 2])) << 8) |
             static_cast<std::uint32_t>(static_cast<unsigned char>(msg[off + 4 * i + 3]));
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = hh + s1 + ch + kSha256K[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }
  std::string hex;
  hex.reserve(64);
  for (std::uint32_t v : h) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    hex += buf;
  }
  return hex;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace noon
