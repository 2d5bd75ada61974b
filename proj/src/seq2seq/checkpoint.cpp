#include "morphoseq/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>

#include "morphoseq/errors.hpp"

namespace morphoseq {
namespace {

using Kind = CheckpointError::Kind;
constexpr std::string_view kTrailer = "EOF!";

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw CheckpointError(Kind::Truncated, std::string("checkpoint truncated while reading ") + what);
  }
}

std::uint64_t get_u64(std::istream& in, const char* what) {
  unsigned char b[8];
  read_exact(in, reinterpret_cast<char*>(b), 8, what);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char b[4];
  read_exact(in, reinterpret_cast<char*>(b), 4, what);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::string get_line(std::istream& in) {
  std::string line;
  // Every header line ends in a newline; hitting EOF first means the file was cut.
  if (!std::getline(in, line) || in.eof()) {
    throw CheckpointError(Kind::Truncated, "checkpoint header truncated");
  }
  return line;
}

std::pair<std::string, std::string> key_value(const std::string& line) {
  const std::size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw CheckpointError(Kind::Malformed, "malformed checkpoint header line '" + line + "'");
  }
  return {line.substr(0, eq), line.substr(eq + 1)};
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw CheckpointError(Kind::Malformed, "bad value for '" + key + "': '" + text + "'");
  }
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Model& model) {
  const ModelConfig& c = model.config;
  out << kCheckpointMagic << '\n'
      << "version=" << kCheckpointVersion << '\n'
      << "mode=" << to_string(model.vocab.mode()) << '\n'
      << "embed_dim=" << model.params.embed_dim() << '\n'
      << "hidden_dim=" << model.params.hidden_dim() << '\n'
      << "batch_size=" << c.batch_size << '\n'
      << "epochs=" << c.epochs << '\n'
      << "max_decode_len=" << c.max_decode_len << '\n'
      << "seed=" << c.seed << '\n'
      << "rho=" << format_double(c.adadelta.rho) << '\n'
      << "eps=" << format_double(c.adadelta.eps) << '\n'
      << "vocab_size=" << model.vocab.size() << '\n';
  for (const Token& t : model.vocab.tokens()) {
    out << "token=" << to_string(t.kind) << '\t' << t.text << '\n';
  }
  std::size_t n_tensors = 0;
  model.params.for_each([&](const std::string&, const Matrix&) { ++n_tensors; });
  out << "tensors=" << n_tensors << '\n' << "end_header\n";

  model.params.for_each([&](const std::string& name, const Matrix& m) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (double v : m.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  });
  out.write(kTrailer.data(), kTrailer.size());
  if (!out) throw ArgumentError("failed writing checkpoint");
}

void save_checkpoint_file(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  save_checkpoint(out, model);
}

Model load_checkpoint(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic)) throw CheckpointError(Kind::Truncated, "empty checkpoint");
  if (magic != kCheckpointMagic) {
    if (in.eof() && kCheckpointMagic.starts_with(magic)) {
      throw CheckpointError(Kind::Truncated, "checkpoint truncated inside the magic line");
    }
    throw CheckpointError(Kind::BadMagic, "not a morphoseq checkpoint");
  }
  {
    auto [k, v] = key_value(get_line(in));
    if (k != "version") throw CheckpointError(Kind::Malformed, "missing checkpoint version");
    const int version = parse_number<int>(k, v);
    if (version != kCheckpointVersion) {
      throw CheckpointError(Kind::VersionMismatch,
                            "checkpoint version " + v + ", this build reads version " +
                                std::to_string(kCheckpointVersion));
    }
  }

  std::map<std::string, std::string> header;
  std::vector<Token> tokens;
  while (true) {
    const std::string line = get_line(in);
    if (line == "end_header") break;
    auto [k, v] = key_value(line);
    if (k == "token") {
      const std::size_t tab = v.find('\t');
      auto kind = tab == std::string::npos ? std::nullopt : parse_token_kind(v.substr(0, tab));
      if (!kind) throw CheckpointError(Kind::Malformed, "bad token line '" + line + "'");
      tokens.push_back({*kind, v.substr(tab + 1)});
    } else {
      header[k] = v;
    }
  }
  auto field = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) {
      throw CheckpointError(Kind::Malformed, std::string("checkpoint header lacks '") + key + "'");
    }
    return it->second;
  };

  Model model;
  const auto mode = parse_mode(field("mode"));
  if (!mode) throw CheckpointError(Kind::Malformed, "unknown mode '" + field("mode") + "'");
  ModelConfig& c = model.config;
  c.embed_dim = parse_number<std::size_t>("embed_dim", field("embed_dim"));
  c.hidden_dim = parse_number<std::size_t>("hidden_dim", field("hidden_dim"));
  c.batch_size = parse_number<std::size_t>("batch_size", field("batch_size"));
  c.epochs = parse_number<std::size_t>("epochs", field("epochs"));
  c.max_decode_len = parse_number<std::size_t>("max_decode_len", field("max_decode_len"));
  c.seed = parse_number<std::uint64_t>("seed", field("seed"));
  c.adadelta.rho = parse_number<double>("rho", field("rho"));
  c.adadelta.eps = parse_number<double>("eps", field("eps"));
  const auto vocab_size = parse_number<std::size_t>("vocab_size", field("vocab_size"));
  const auto n_tensors = parse_number<std::size_t>("tensors", field("tensors"));
  if (tokens.size() != vocab_size) {
    throw CheckpointError(Kind::ShapeMismatch, "header declares " + std::to_string(vocab_size) +
                                                   " tokens but lists " +
                                                   std::to_string(tokens.size()));
  }
  try {
    model.vocab = Vocabulary::from_tokens(*mode, std::move(tokens));
  } catch (const ArgumentError& e) {
    throw CheckpointError(Kind::Malformed, e.what());
  }

  ModelParams params(vocab_size, c.embed_dim, c.hidden_dim);
  std::size_t expected_tensors = 0;
  params.for_each([&](const std::string&, const Matrix&) { ++expected_tensors; });
  if (n_tensors != expected_tensors) {
    throw CheckpointError(Kind::ShapeMismatch, "checkpoint has " + std::to_string(n_tensors) +
                                                   " tensors, expected " +
                                                   std::to_string(expected_tensors));
  }
  params.for_each([&](const std::string& name, Matrix& m) {
    const std::uint32_t len = get_u32(in, "tensor name length");
    if (len > 4096) throw CheckpointError(Kind::Malformed, "implausible tensor name length");
    std::string stored(len, '\0');
    read_exact(in, stored.data(), len, "tensor name");
    if (stored != name) {
      throw CheckpointError(Kind::Malformed, "expected tensor '" + name + "', found '" + stored + "'");
    }
    const std::uint64_t rows = get_u64(in, "tensor shape");
    const std::uint64_t cols = get_u64(in, "tensor shape");
    if (rows != m.rows() || cols != m.cols()) {
      throw CheckpointError(Kind::ShapeMismatch,
                            "tensor '" + name + "' stored as (" + std::to_string(rows) + "x" +
                                std::to_string(cols) + "), model expects " + m.shape_string());
    }
    for (double& v : m.values()) v = std::bit_cast<double>(get_u64(in, "tensor values"));
  });
  char trailer[4];
  read_exact(in, trailer, 4, "trailer");
  if (std::string_view(trailer, 4) != kTrailer) {
    throw CheckpointError(Kind::Malformed, "checkpoint trailer missing");
  }
  model.params = std::move(params);
  return model;
}

Model load_checkpoint(std::istream& in, const Vocabulary& expected) {
  Model m = load_checkpoint(in);
  if (!(m.vocab == expected)) {
    throw CheckpointError(Kind::ShapeMismatch,
                          "checkpoint vocabulary (" + std::to_string(m.vocab.size()) +
                              " symbols) differs from the expected one (" +
                              std::to_string(expected.size()) + " symbols)");
  }
  return m;
}

Model load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace morphoseq
