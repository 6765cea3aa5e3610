// Copyright 2026 The mgkb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGKB_SKIPGRAM_H_
#define MGKB_SKIPGRAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mgkb {
namespace embed {

struct SkipGramConfig {
  int dim = 300;
  int window = 4;      // maximum; the effective window is drawn per position
  int negatives = 10;
  int min_count = 2;
  int epochs = 20;
  double lr_start = 0.025;
  double lr_end = 1e-4;
  std::uint64_t seed = 1;
  int threads = 1;     // >1 enables lock-free (hogwild) updates
};

class Vocabulary {
 public:
  // Terms must be distinct.
  void Add(const std::string &term, std::uint64_t count);

  int Index(const std::string &term) const;  // -1 when absent
  bool Contains(const std::string &term) const { return Index(term) >= 0; }
  const std::string &Term(int index) const { return terms_[index]; }
  std::uint64_t Count(int index) const { return counts_[index]; }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<std::string> &terms() const { return terms_; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

// Word vectors in row-major V x dim layout.
struct SkipGramModel {
  Vocabulary vocab;
  int dim = 0;
  std::vector<double> input;   // word vectors
  std::vector<double> output;  // context vectors
  SkipGramConfig config;
  std::vector<double> epoch_loss;  // mean loss per (center, context) pair

  std::span<const double> Vector(int index) const {
    return {input.data() + static_cast<std::size_t>(index) * dim,
            static_cast<std::size_t>(dim)};
  }
  // Throws Error naming the term when it is out of vocabulary.
  std::span<const double> Vector(const std::string &term) const;
};

// Counts tokens, drops those below min_count, orders by count descending then
// term ascending.
Vocabulary BuildVocabulary(const std::vector<std::vector<std::string>> &corpus,
                           int min_count);

SkipGramModel TrainSkipGram(const std::vector<std::vector<std::string>> &corpus,
                            const SkipGramConfig &config);

double Cosine(std::span<const double> a, std::span<const double> b);
double Cosine(const SkipGramModel &model, const std::string &w1,
              const std::string &w2);

// Gradients of the negative-sampling loss for one (center, context) pair.
struct PairGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// loss = -log s(context . center) - sum_n log s(-negative_n . center)
double NegativeSamplingLoss(std::span<const double> center,
                            std::span<const double> context,
                            const std::vector<std::span<const double>> &negatives,
                            PairGradient *grad);

// Binary layout, all integers and floats little-endian:
//   "MGSG" | u32 version (1) | u32 V | u32 dim
//   V x { u32 byte length | UTF-8 term | u64 count }
//   V*dim f32 input vectors | V*dim f32 output vectors
void SaveModel(const SkipGramModel &model, const std::string &path);
SkipGramModel LoadModel(const std::string &path);
std::string SerializeModel(const SkipGramModel &model);
SkipGramModel DeserializeModel(std::string_view bytes);

}  // namespace embed
}  // namespace mgkb

#endif  // MGKB_SKIPGRAM_H_
