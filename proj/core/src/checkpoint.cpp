// Copyright 2026 The tirvis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tirvis/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

namespace tirvis::train {

namespace {

enum DType : std::uint8_t { kF32 = 0, kU64 = 1 };

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <class U>
  void uint(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void header(const std::string& name, DType type, std::span<const std::int64_t> extents) {
    uint<std::uint32_t>(static_cast<std::uint32_t>(name.size()));
    bytes(name.data(), name.size());
    uint<std::uint8_t>(type);
    uint<std::uint8_t>(static_cast<std::uint8_t>(extents.size()));
    for (auto e : extents) uint<std::uint64_t>(static_cast<std::uint64_t>(e));
    ++records_;
  }
  void f32(const std::string& name, std::span<const std::int64_t> extents, std::span<const float> values) {
    header(name, kF32, extents);
    for (float v : values) uint<std::uint32_t>(std::bit_cast<std::uint32_t>(v));
  }
  void u64(const std::string& name, std::span<const std::uint64_t> values) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    header(name, kU64, std::span<const std::int64_t>(&n, 1));
    for (auto v : values) uint<std::uint64_t>(v);
  }
  std::vector<std::uint8_t>& buffer() { return out_; }
  std::uint32_t records() const { return records_; }

 private:
  std::vector<std::uint8_t> out_;
  std::uint32_t records_ = 0;
};

struct Record {
  DType type;
  std::vector<std::int64_t> extents;
  std::vector<float> f32;
  std::vector<std::uint64_t> u64;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      throw CheckpointError(std::string("checkpoint truncated while reading ") + what + " at byte " +
                            std::to_string(pos_));
    }
  }
  template <class U>
  U uint(const char* what) {
    need(sizeof(U), what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return v;
  }
  std::string text(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

void write_set(Writer& w, const std::string& prefix, const ParameterSet& set) {
  for (const auto& [name, t] : set) w.f32(prefix + name, t.shape().extents(), t.data());
}

std::vector<std::string> names_of(const std::string& prefix, const ParameterSet& set) {
  std::vector<std::string> out;
  for (const auto& [name, t] : set) out.push_back(prefix + name);
  return out;
}

std::vector<std::string> generator_names(const Models& m) {
  auto a = names_of("G.", m.G.parameters());
  auto b = names_of("F.", m.F.parameters());
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> discriminator_names(const Models& m) {
  auto a = names_of("D_X.", m.D_X.parameters());
  auto b = names_of("D_Y.", m.D_Y.parameters());
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void write_adam(Writer& w, const std::string& group, const AdamState& s, const std::vector<std::string>& names,
                const std::vector<Tensor<float>>& tensors) {
  const std::uint64_t t[] = {s.t};
  w.u64("adam." + group + ".t", t);
  for (std::size_t i = 0; i < names.size(); ++i) {
    w.f32("adam." + group + ".m." + names[i], tensors[i].shape().extents(), s.m[i]);
    w.f32("adam." + group + ".v." + names[i], tensors[i].shape().extents(), s.v[i]);
  }
}

void write_buffer(Writer& w, const std::string& name, const FakeBuffer& b) {
  const std::uint64_t rng[] = {b.rng().key(), b.rng().counter()};
  w.u64(name + ".rng", rng);
  for (std::size_t i = 0; i < b.images().size(); ++i) {
    w.f32(name + ".image." + std::to_string(i), b.images()[i].shape().extents(), b.images()[i].data());
  }
}

class RecordMap {
 public:
  explicit RecordMap(std::map<std::string, Record> records) : records_(std::move(records)) {}

  Record take(const std::string& name, DType type) {
    auto it = records_.find(name);
    if (it == records_.end()) throw CheckpointError("checkpoint is missing record '" + name + "'");
    if (it->second.type != type) throw CheckpointError("checkpoint record '" + name + "' has the wrong dtype");
    Record r = std::move(it->second);
    records_.erase(it);
    return r;
  }
  bool contains(const std::string& name) const { return records_.contains(name); }

  void fill(const std::string& name, Tensor<float>& t) {
    fill(name, t.shape(), t.data());
  }
  void fill(const std::string& name, const diff::Shape& shape, std::span<float> dst) {
    Record r = take(name, kF32);
    if (diff::Shape(std::span<const std::int64_t>(r.extents)) != shape) {
      throw CheckpointError("checkpoint record '" + name + "' has shape " +
                            diff::Shape(std::span<const std::int64_t>(r.extents)).str() + ", expected " +
                            shape.str());
    }
    std::copy(r.f32.begin(), r.f32.end(), dst.begin());
  }
  std::vector<std::uint64_t> u64(const std::string& name, std::size_t count) {
    Record r = take(name, kU64);
    if (r.u64.size() != count) throw CheckpointError("checkpoint record '" + name + "' has the wrong length");
    return r.u64;
  }
  void finish() const {
    if (!records_.empty()) throw CheckpointError("checkpoint has unexpected record '" + records_.begin()->first + "'");
  }

 private:
  std::map<std::string, Record> records_;
};

void read_set(RecordMap& r, const std::string& prefix, ParameterSet& set) {
  for (auto& [name, t] : set) r.fill(prefix + name, t);
}

void read_adam(RecordMap& r, const std::string& group, AdamState& s, const std::vector<std::string>& names,
               const std::vector<Tensor<float>>& tensors) {
  s.t = r.u64("adam." + group + ".t", 1)[0];
  for (std::size_t i = 0; i < names.size(); ++i) {
    r.fill("adam." + group + ".m." + names[i], tensors[i].shape(), s.m[i]);
    r.fill("adam." + group + ".v." + names[i], tensors[i].shape(), s.v[i]);
  }
}

void read_buffer(RecordMap& r, const std::string& name, FakeBuffer& b) {
  const auto rng = r.u64(name + ".rng", 2);
  std::vector<Tensor<float>> images;
  for (std::size_t i = 0; r.contains(name + ".image." + std::to_string(i)); ++i) {
    Record rec = r.take(name + ".image." + std::to_string(i), kF32);
    const diff::Shape shape(std::span<const std::int64_t>(rec.extents));
    images.emplace_back(shape, std::move(rec.f32));
  }
  if (images.size() > static_cast<std::size_t>(b.capacity())) {
    throw CheckpointError("checkpoint fake buffer '" + name + "' exceeds its capacity");
  }
  b.restore(std::move(images), CounterRng(rng[0], rng[1]));
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const TrainState& state) {
  // The const_casts only reach accessors that do not modify anything.
  auto& models = const_cast<Models&>(state.models);
  Writer w;
  write_set(w, "G.", state.models.G.parameters());
  write_set(w, "F.", state.models.F.parameters());
  write_set(w, "D_X.", state.models.D_X.parameters());
  write_set(w, "D_Y.", state.models.D_Y.parameters());
  write_adam(w, "generators", state.adam_generators, generator_names(models), models.generator_tensors());
  write_adam(w, "discriminators", state.adam_discriminators, discriminator_names(models),
             models.discriminator_tensors());
  write_buffer(w, "buffer_x", state.buffer_x);
  write_buffer(w, "buffer_y", state.buffer_y);
  const std::uint64_t step[] = {state.step};
  const std::uint64_t epoch[] = {state.epoch};
  w.u64("trainer.step", step);
  w.u64("trainer.epoch", epoch);

  Writer head;
  head.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  head.uint<std::uint32_t>(kCheckpointVersion);
  const std::string config = state.config.to_text();
  head.uint<std::uint32_t>(static_cast<std::uint32_t>(config.size()));
  head.bytes(config.data(), config.size());
  head.uint<std::uint32_t>(w.records());
  auto out = std::move(head.buffer());
  out.insert(out.end(), w.buffer().begin(), w.buffer().end());
  return out;
}

TrainState deserialize_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(sizeof kCheckpointMagic, "magic");
  if (std::memcmp(bytes.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0) {
    throw CheckpointError("not a tirvis checkpoint (bad magic bytes)");
  }
  r.text(sizeof kCheckpointMagic, "magic");
  const auto version = r.uint<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  const auto config_len = r.uint<std::uint32_t>("config length");
  TrainConfig config;
  try {
    config = TrainConfig::from_text(r.text(config_len, "config"));
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint config block is invalid: ") + e.what());
  }

  const auto count = r.uint<std::uint32_t>("record count");
  std::map<std::string, Record> records;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = r.uint<std::uint32_t>("record name length");
    std::string name = r.text(name_len, "record name");
    Record rec;
    const auto type = r.uint<std::uint8_t>("dtype");
    if (type != kF32 && type != kU64) throw CheckpointError("record '" + name + "' has unknown dtype");
    rec.type = static_cast<DType>(type);
    const auto rank = r.uint<std::uint8_t>("rank");
    if (rank < 1 || rank > diff::Shape::kMaxRank) throw CheckpointError("record '" + name + "' has invalid rank");
    const std::size_t width = rec.type == kF32 ? 4 : 8;
    const std::uint64_t budget = (bytes.size() - r.pos()) / width;
    std::uint64_t numel = 1;
    for (int a = 0; a < rank; ++a) {
      const auto e = r.uint<std::uint64_t>("extent");
      if (e < 1) throw CheckpointError("record '" + name + "' has a zero extent");
      rec.extents.push_back(static_cast<std::int64_t>(e));
      if (e > budget || numel > budget / e) {
        throw CheckpointError("checkpoint truncated while reading values of record '" + name + "'");
      }
      numel *= e;
    }
    if (rec.type == kF32) {
      rec.f32.resize(numel);
      for (auto& v : rec.f32) v = std::bit_cast<float>(r.uint<std::uint32_t>("values"));
    } else {
      rec.u64.resize(numel);
      for (auto& v : rec.u64) v = r.uint<std::uint64_t>("values");
    }
    if (!records.emplace(std::move(name), std::move(rec)).second) {
      throw CheckpointError("checkpoint has a duplicate record");
    }
  }
  if (!r.done()) throw CheckpointError("checkpoint has trailing bytes after the last record");

  RecordMap map(std::move(records));
  Models models = Models::zeros(config);
  read_set(map, "G.", models.G.parameters());
  read_set(map, "F.", models.F.parameters());
  read_set(map, "D_X.", models.D_X.parameters());
  read_set(map, "D_Y.", models.D_Y.parameters());
  auto gen = models.generator_tensors();
  auto disc = models.discriminator_tensors();
  auto adam_g = AdamState::for_parameters(gen);
  auto adam_d = AdamState::for_parameters(disc);
  read_adam(map, "generators", adam_g, generator_names(models), gen);
  read_adam(map, "discriminators", adam_d, discriminator_names(models), disc);
  FakeBuffer bx(config.buffer_capacity, CounterRng());
  FakeBuffer by(config.buffer_capacity, CounterRng());
  read_buffer(map, "buffer_x", bx);
  read_buffer(map, "buffer_y", by);
  const auto step = map.u64("trainer.step", 1)[0];
  const auto epoch = map.u64("trainer.epoch", 1)[0];
  map.finish();
  return TrainState{config,         std::move(models), std::move(adam_g), std::move(adam_d), std::move(bx),
                    std::move(by), step,              epoch};
}

void save_checkpoint(const TrainState& state, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(state);
  // Write-then-rename so a crash never leaves a half-written checkpoint.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("failed writing checkpoint '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

TrainState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace tirvis::train
