#include <nlohmann/json.hpp>

#include <cstring>

#include "footlift/io/file_io.hpp"
#include "footlift/nn/checkpoint.hpp"

namespace footlift::nn {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'F', 'L', 'I', 'F', 'T', 'C', 'K', 'P'};
constexpr std::uint32_t kCkptVersion = 1;

void append_u32(std::string& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(b, 4);
}

void append_u64(std::string& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.append(b, 8);
}

std::uint32_t read_u32(const std::string& s, size_t& off) {
  if (off + 4 > s.size()) throw FormatError("checkpoint truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + i]))
         << (8 * i);
  off += 4;
  return v;
}

std::uint64_t read_u64(const std::string& s, size_t& off) {
  if (off + 8 > s.size()) throw FormatError("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[off + i]))
         << (8 * i);
  off += 8;
  return v;
}

void append_tensor(std::string& out, const Tensor& t) {
  static_assert(sizeof(double) == 8);
  const size_t bytes = static_cast<size_t>(t.size()) * 8;
  const size_t pos = out.size();
  out.resize(pos + bytes);
  std::memcpy(out.data() + pos, t.data(), bytes);
}

Tensor read_tensor(const std::string& s, size_t& off, int rows, int cols) {
  Tensor t(rows, cols);
  const size_t bytes = static_cast<size_t>(t.size()) * 8;
  if (off + bytes > s.size()) throw FormatError("checkpoint blob truncated");
  std::memcpy(t.data(), s.data() + off, bytes);
  off += bytes;
  if (!t.all_finite()) throw FormatError("checkpoint tensor is not finite");
  return t;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::string& metadata_json, const AdamW* optimizer) {
  json dir = json::array();
  for (const auto& p : params.items())
    dir.push_back({{"name", p.name},
                   {"rows", p.value.rows()},
                   {"cols", p.value.cols()}});
  json header = {
      {"format_version", kFormatVersion},
      {"metadata", metadata_json.empty()
                       ? json(nullptr)
                       : json::parse(metadata_json)},
      {"tensors", dir},
      {"adam", optimizer != nullptr},
  };
  if (optimizer) header["adam_step"] = optimizer->step_count();
  const std::string header_text = header.dump();

  std::string out;
  out.append(kMagic, 8);
  append_u32(out, kCkptVersion);
  append_u64(out, header_text.size());
  out += header_text;
  for (const auto& p : params.items()) append_tensor(out, p.value);
  if (optimizer) {
    for (const auto& t : optimizer->m()) append_tensor(out, t);
    for (const auto& t : optimizer->v()) append_tensor(out, t);
  }
  io::write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::string s = io::read_file(path);
  if (s.size() < 20 || std::memcmp(s.data(), kMagic, 8) != 0)
    throw FormatError("not a footlift checkpoint: " + path);
  size_t off = 8;
  const std::uint32_t version = read_u32(s, off);
  if (version != kCkptVersion)
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  const std::uint64_t hlen = read_u64(s, off);
  if (off + hlen > s.size()) throw FormatError("checkpoint header truncated");
  json header = json::parse(s.substr(off, hlen));
  off += hlen;

  Checkpoint ckpt;
  if (!header.at("metadata").is_null())
    ckpt.metadata_json = header.at("metadata").dump();
  for (const auto& e : header.at("tensors")) {
    const int rows = e.at("rows").get<int>();
    const int cols = e.at("cols").get<int>();
    Param& p = ckpt.params.create(e.at("name").get<std::string>(), rows, cols);
    p.value = read_tensor(s, off, rows, cols);
  }
  if (header.at("adam").get<bool>()) {
    OptimizerState st;
    st.t = header.at("adam_step").get<long>();
    for (const auto& p : ckpt.params.items())
      st.m.push_back(read_tensor(s, off, p.value.rows(), p.value.cols()));
    for (const auto& p : ckpt.params.items())
      st.v.push_back(read_tensor(s, off, p.value.rows(), p.value.cols()));
    ckpt.optimizer = std::move(st);
  }
  if (off != s.size()) throw FormatError("trailing bytes in checkpoint");
  return ckpt;
}

}  // namespace footlift::nn
