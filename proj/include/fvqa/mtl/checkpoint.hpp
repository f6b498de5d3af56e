#ifndef FVQA_MTL_CHECKPOINT_HPP_
#define FVQA_MTL_CHECKPOINT_HPP_

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "fvqa/error.hpp"
#include "fvqa/jsonl.hpp"
#include "fvqa/mtl/params.hpp"
#include "fvqa/mtl/trainer.hpp"

namespace fvqa::mtl {

// Binary layout, all integers and doubles little-endian:
//   magic "FVQAMTL\0", u32 version
//   u64 vocab, word_dim, hidden_dim, image_dim, answers, elements
//   u8 single_task
//   u64 question/answer/element vocabulary hashes
//   f64 parameters, tensor by tensor in MultitaskParams::kNames order
// Vocabularies are rebuilt from the dataset's train split at load time and
// checked against the stored hashes.
inline constexpr std::array<char, 8> kCheckpointMagic = {'F', 'V', 'Q', 'A', 'M', 'T', 'L', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw Error(ErrorCode::kParse, "truncated checkpoint");
  }
  return v;
}

}  // namespace detail

inline void save_checkpoint(std::ostream& out, const Model& m) {
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  const auto d = m.params.dims();
  for (std::uint64_t v : {d.vocab, d.word_dim, d.hidden_dim, d.image_dim, d.answers, d.elements}) {
    detail::put<std::uint64_t>(out, v);
  }
  detail::put<std::uint8_t>(out, m.single_task ? 1 : 0);
  detail::put<std::uint64_t>(out, m.vocab.words().hash());
  detail::put<std::uint64_t>(out, m.answers.hash());
  detail::put<std::uint64_t>(out, m.elements.hash());
  for (auto t : m.params.tensors()) {
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw Error(ErrorCode::kIo, "checkpoint write failed");
}

inline void save_checkpoint(const std::string& path, const Model& m) {
  auto out = open_output(path);
  save_checkpoint(out, m);
}

// vocab, answers and elements must be the ones the model was trained with.
inline Model load_checkpoint(std::istream& in, QuestionVocab vocab, IndexedSet answers,
                             IndexedSet elements) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
    throw Error(ErrorCode::kParse, "not a checkpoint file");
  }
  const auto version = detail::get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kParse, "unsupported checkpoint version " + std::to_string(version));
  }
  ModelDims d;
  d.vocab = detail::get<std::uint64_t>(in);
  d.word_dim = detail::get<std::uint64_t>(in);
  d.hidden_dim = detail::get<std::uint64_t>(in);
  d.image_dim = detail::get<std::uint64_t>(in);
  d.answers = detail::get<std::uint64_t>(in);
  d.elements = detail::get<std::uint64_t>(in);
  Model m;
  m.single_task = detail::get<std::uint8_t>(in) != 0;
  const auto vocab_hash = detail::get<std::uint64_t>(in);
  const auto answer_hash = detail::get<std::uint64_t>(in);
  const auto element_hash = detail::get<std::uint64_t>(in);
  if (vocab_hash != vocab.words().hash() || answer_hash != answers.hash() ||
      element_hash != elements.hash()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "checkpoint vocabularies differ from the dataset's train split");
  }
  m.params = MultitaskParams::zeros(d);
  for (auto t : m.params.tensors()) {
    if (!in.read(reinterpret_cast<char*>(t.data()),
                 static_cast<std::streamsize>(t.size() * sizeof(double)))) {
      throw Error(ErrorCode::kParse, "truncated checkpoint");
    }
  }
  m.vocab = std::move(vocab);
  m.answers = std::move(answers);
  m.elements = std::move(elements);
  return m;
}

inline Model load_checkpoint(const std::string& path, const Dataset& dataset) {
  auto in = open_input(path);
  const auto train = dataset.split(Split::kTrain);
  try {
    return load_checkpoint(in, QuestionVocab::build(train), dataset.answer_vocab,
                           dataset.element_vocab);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail());
  }
}

}  // namespace fvqa::mtl

#endif  // FVQA_MTL_CHECKPOINT_HPP_
