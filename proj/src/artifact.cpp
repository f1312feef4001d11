#include "ats/artifact.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "the model container stores floats little-endian");

namespace ats {
namespace {

constexpr char kMagic[4] = {'A', 'T', 'S', 'M'};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_u32(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::string& out, std::uint64_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint32_t u32() { return read_scalar<std::uint32_t>(); }
  std::uint64_t u64() { return read_scalar<std::uint64_t>(); }

  std::string bytes(std::size_t n) {
    require(n);
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  void doubles(double* dst, std::size_t count) {
    require(count * sizeof(double));
    std::memcpy(dst, bytes_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  template <typename T>
  T read_scalar() {
    require(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void require(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw CorruptSection("model file is truncated");
    }
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

std::string hyper_section_text(const HyperParams& hp, const TrainingMeta& meta) {
  std::ostringstream os;
  os << "vocab_size = " << hp.vocab_size << '\n'
     << "embed_dim = " << hp.embed_dim << '\n'
     << "enc_hidden = " << hp.enc_hidden << '\n'
     << "dec_hidden = " << hp.dec_hidden << '\n'
     << "attn_dim = " << hp.attn_dim << '\n'
     << "max_in_len = " << hp.max_in_len << '\n'
     << "max_out_len = " << hp.max_out_len << '\n'
     << "batch_size = " << hp.batch_size << '\n'
     << "epochs = " << hp.epochs << '\n'
     << "seed = " << hp.seed << '\n'
     << "epochs_run = " << meta.epochs_run << '\n'
     << "final_loss = " << format_double(meta.final_loss) << '\n'
     << "gru_update = h_new = (1 - z) * h_prev + z * h_cand\n";
  return os.str();
}

void parse_hyper_section(const std::string& text, HyperParams& hp, TrainingMeta& meta) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    try {
      if (key == "vocab_size") hp.vocab_size = std::stoull(value);
      else if (key == "embed_dim") hp.embed_dim = std::stoull(value);
      else if (key == "enc_hidden") hp.enc_hidden = std::stoull(value);
      else if (key == "dec_hidden") hp.dec_hidden = std::stoull(value);
      else if (key == "attn_dim") hp.attn_dim = std::stoull(value);
      else if (key == "max_in_len") hp.max_in_len = std::stoull(value);
      else if (key == "max_out_len") hp.max_out_len = std::stoull(value);
      else if (key == "batch_size") hp.batch_size = std::stoull(value);
      else if (key == "epochs") hp.epochs = std::stoull(value);
      else if (key == "seed") hp.seed = std::stoull(value);
      else if (key == "epochs_run") meta.epochs_run = std::stoull(value);
      else if (key == "final_loss") meta.final_loss = std::stod(value);
      // unknown keys (such as the format note) are informational
    } catch (const std::exception&) {
      throw CorruptSection("bad value in model config section: " + line);
    }
  }
  meta.seed = hp.seed;
}

}  // namespace

void save_model(const ModelArtifact& artifact, const std::string& path) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  write_u32(out, artifact.version);

  const std::string config = hyper_section_text(artifact.hyper, artifact.meta);
  write_u64(out, config.size());
  out += config;

  std::ostringstream vocab_os;
  artifact.vocab.write(vocab_os);
  const std::string vocab = vocab_os.str();
  write_u64(out, vocab.size());
  out += vocab;

  std::string matrices;
  const auto params = artifact.params.parameters();
  write_u32(matrices, static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    write_u32(matrices, static_cast<std::uint32_t>(p->name.size()));
    matrices += p->name;
    write_u32(matrices, static_cast<std::uint32_t>(p->value.rows()));
    write_u32(matrices, static_cast<std::uint32_t>(p->value.cols()));
    matrices.append(reinterpret_cast<const char*>(p->value.data()),
                    p->value.size() * sizeof(double));
  }
  write_u64(out, matrices.size());
  out += matrices;

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open model file for writing: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw DataError("write failed for model file: " + path);
}

ModelArtifact load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  Reader reader(buffer.str());

  const std::string magic = reader.bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    throw BadMagic("not a model file (bad magic): " + path);
  }

  ModelArtifact artifact;
  artifact.version = reader.u32();
  if (artifact.version != kModelFormatVersion) {
    throw ModelVersionMismatch("unsupported model format version " +
                               std::to_string(artifact.version));
  }

  const std::string config = reader.bytes(reader.u64());
  parse_hyper_section(config, artifact.hyper, artifact.meta);
  artifact.hyper.validate();

  std::istringstream vocab_is(reader.bytes(reader.u64()));
  artifact.vocab = Vocabulary::read(vocab_is);
  if (artifact.vocab.size() != artifact.hyper.vocab_size) {
    throw CorruptSection("vocabulary size does not match the config section");
  }

  const std::uint64_t matrices_len = reader.u64();
  if (matrices_len != reader.remaining()) {
    throw CorruptSection("matrix section length does not match the file size");
  }
  artifact.params = ModelParams::zeros(artifact.hyper);
  const auto params = artifact.params.parameters();
  const std::uint32_t count = reader.u32();
  if (count != params.size()) {
    throw CorruptSection("unexpected matrix count " + std::to_string(count));
  }
  for (Parameter* p : params) {
    const std::string name = reader.bytes(reader.u32());
    if (name != p->name) {
      throw CorruptSection("matrix name mismatch: expected " + p->name + ", found " + name);
    }
    const std::uint32_t rows = reader.u32();
    const std::uint32_t cols = reader.u32();
    if (rows != p->value.rows() || cols != p->value.cols()) {
      throw CorruptSection("matrix shape mismatch for " + p->name);
    }
    reader.doubles(p->value.data(), p->value.size());
    if (!p->value.all_finite()) {
      throw CorruptSection("matrix " + p->name + " contains non-finite entries");
    }
  }
  if (reader.remaining() != 0) {
    throw CorruptSection("trailing bytes after the matrix section");
  }
  return artifact;
}

}  // namespace ats
