#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "molgen/decoder/model.hpp"
#include "molgen/decoder/train.hpp"
#include "molgen/decoder/transformer.hpp"
#include "molgen/decoder/vocab.hpp"
#include "molgen/error.hpp"
#include "molgen/numcore/grad_check.hpp"

namespace molgen::decoder {
namespace {

using num::Matrix;
using num::Tape;

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

ModelDims tiny_dims() {
  ModelDims d;
  d.d = 8;
  d.heads = 2;
  d.head_dim = 4;
  d.layers = 2;
  d.ffn_mult = 2;
  d.max_len = 16;
  d.r = 2;
  return d;
}

Example make_example(const Model& m, const std::string& id, const std::string& smiles, std::uint64_t seed) {
  Rng rng(seed);
  Example ex;
  ex.id = id;
  const std::size_t d = m.fusion.dims.d;
  ex.input.h_org = random_matrix(3, d, rng);
  ex.input.h_exp = random_matrix(2, d, rng);
  if (m.fusion.has_pred()) {
    ex.input.pred_multi_hot =
        fusion::encode_predictions({smiles, "CC"}, m.vocab.symbols(), m.fusion.dims.r).multi_hot;
  }
  ex.target = encode_target(m.vocab, smiles, m.decoder.dims.max_len);
  return ex;
}

DecoderParams small_decoder(std::size_t vocab, std::uint64_t seed = 3) {
  Rng rng(seed);
  return DecoderParams::init({8, 2, 4, 2, 2, vocab, 12}, rng);
}

TEST(Vocab, ReservedSymbolsAndTwoCharacterTokens) {
  const Vocab v = Vocab::smiles({"CCl", "C*C"});
  EXPECT_EQ(v.token(Vocab::kPad), "<pad>");
  EXPECT_EQ(v.token(Vocab::kEos), "<eos>");
  const std::vector<int> enc = v.encode("CCl");
  ASSERT_EQ(enc.size(), 2u);
  EXPECT_EQ(v.token(enc[1]), "Cl");
  EXPECT_EQ(v.decode(enc), "CCl");
  // '*' came from the targets, so it is a real symbol rather than UNK.
  std::size_t unknown = 0;
  EXPECT_EQ(v.decode(v.encode("C*C", &unknown)), "C*C");
  EXPECT_EQ(unknown, 0u);
  v.encode("CZ", &unknown);
  EXPECT_EQ(unknown, 1u);
}

TEST(Vocab, IndexMapIsBijective) {
  const Vocab v = Vocab::smiles({});
  for (std::size_t i = Vocab::kReserved; i < v.size(); ++i) {
    const std::vector<int> enc = v.encode(v.token(static_cast<int>(i)));
    ASSERT_EQ(enc.size(), 1u) << v.token(static_cast<int>(i));
    EXPECT_EQ(enc[0], static_cast<int>(i));
  }
  EXPECT_THROW(Vocab::from_symbols({"C", "C"}), DataError);
  EXPECT_THROW(Vocab::from_symbols({""}), DataError);
}

TEST(Vocab, CharactersCoverEveryByte) {
  const Vocab v = Vocab::characters({"The molecule.", "An acid"});
  EXPECT_EQ(v.decode(v.encode("The acid.")), "The acid.");
}

TEST(EncodeTarget, AppendsEosOrTruncates) {
  const Vocab v = Vocab::smiles({});
  bool cut = true;
  std::vector<int> t = encode_target(v, "CO", 8, nullptr, &cut);
  EXPECT_FALSE(cut);
  EXPECT_EQ(t.back(), Vocab::kEos);
  EXPECT_EQ(t.size(), 3u);
  t = encode_target(v, "CCCCCCCC", 8, nullptr, &cut);
  EXPECT_TRUE(cut);
  EXPECT_EQ(t.size(), 8u);
  t = encode_target(v, "CCCCCCC", 8, nullptr, &cut);
  EXPECT_FALSE(cut);
  EXPECT_EQ(t.size(), 8u);
}

TEST(DecoderForward, RowsSoftmaxToDistributions) {
  DecoderParams p = small_decoder(10);
  Tape tape(false);
  const BoundDecoder b = bind(tape, p);
  Rng rng(1);
  const num::Var mem = tape.constant(random_matrix(1, 8, rng));
  const std::vector<int> prefix = {1, 5, 6, 7, 4};
  const Matrix logits = forward(b, mem, prefix).value();
  ASSERT_EQ(logits.rows(), prefix.size());
  ASSERT_EQ(logits.cols(), 10u);
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const std::vector<double> p = num::softmax(logits.row(r));
    double s = 0.0;
    for (double x : p) s += x;
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(DecoderForward, FutureTokensNeverChangePastRows) {
  DecoderParams p = small_decoder(10);
  Tape tape(false);
  const BoundDecoder b = bind(tape, p);
  Rng rng(2);
  const num::Var mem = tape.constant(random_matrix(1, 8, rng));
  const std::vector<int> base = {1, 4, 5, 6, 7, 8, 9};
  const Matrix ref = forward(b, mem, base).value();
  for (std::size_t t = 1; t < base.size(); ++t) {
    std::vector<int> changed = base;
    changed[t] = changed[t] == 4 ? 9 : 4;
    const Matrix out = forward(b, mem, changed).value();
    for (std::size_t r = 0; r < t; ++r) {
      for (std::size_t c = 0; c < ref.cols(); ++c) ASSERT_EQ(out(r, c), ref(r, c)) << "t=" << t << " r=" << r;
    }
    bool differs = false;
    for (std::size_t c = 0; c < ref.cols(); ++c) differs |= out(t, c) != ref(t, c);
    EXPECT_TRUE(differs) << "row " << t << " should see its own token";
  }
}

TEST(DecoderForward, ZeroOutputLayerIsUniform) {
  DecoderParams p = small_decoder(10);
  p.w_out.value = Matrix(8, 10);
  Tape tape(false);
  const BoundDecoder b = bind(tape, p);
  Rng rng(4);
  const num::Var mem = tape.constant(random_matrix(1, 8, rng));
  const std::vector<int> prefix = {1, 5, 6};
  const num::Var logits = forward(b, mem, prefix);
  for (std::size_t r = 0; r < 3; ++r) {
    for (double x : num::softmax(logits.value().row(r))) EXPECT_NEAR(x, 0.1, 1e-15);
  }
  const std::vector<int> targets = {5, 6, 2};
  EXPECT_NEAR(ce_loss(logits, targets).value()[0], std::log(10.0), 1e-12);
}

TEST(DecoderForward, RejectsBadPrefixes) {
  DecoderParams p = small_decoder(10);
  Tape tape(false);
  const BoundDecoder b = bind(tape, p);
  const num::Var mem = tape.constant(Matrix(1, 8));
  EXPECT_THROW(forward(b, mem, std::vector<int>{}), DomainError);
  EXPECT_THROW(forward(b, mem, std::vector<int>(13, 1)), DomainError);
  EXPECT_THROW(forward(b, mem, std::vector<int>{1, 10}), DomainError);
  EXPECT_THROW(forward(b, mem, std::vector<int>{1, -1}), DomainError);
  EXPECT_THROW(forward(b, tape.constant(Matrix(1, 7)), std::vector<int>{1}), ShapeError);
}

TEST(CeLoss, HandComputedFixture) {
  // Row 0 gives the target 0.5, row 1 gives it 0.25, row 2 is padding.
  Tape tape(false);
  const double third = 0.5 / 3.0;
  const Matrix logits = Matrix::from_rows({{std::log(third), std::log(0.5), std::log(third), std::log(third)},
                                           {0.0, 0.0, 0.0, 0.0},
                                           {5.0, -3.0, 1.0, 0.0}});
  const std::vector<int> targets = {1, 2, Vocab::kPad};
  const double loss = ce_loss(tape.constant(logits), targets).value()[0];
  EXPECT_NEAR(loss, (std::log(2.0) + std::log(4.0)) / 2.0, 1e-12);
}

TEST(CeLoss, ConfidentModelHasZeroLoss) {
  Tape tape(false);
  const std::vector<int> targets = {1, 3};
  const double loss = ce_loss(tape.constant(Matrix::from_rows({{0, 800, 0, 0}, {0, 0, 0, 800}})), targets).value()[0];
  EXPECT_EQ(loss, 0.0);
}

TEST(CeLoss, AllPaddingIsDomainError) {
  Tape tape(false);
  const std::vector<int> targets = {Vocab::kPad, Vocab::kPad};
  EXPECT_THROW(ce_loss(tape.constant(Matrix(2, 4)), targets), DomainError);
}

TEST(Generate, EosRiggedModelReturnsEmpty) {
  DecoderParams p = small_decoder(10);
  p.w_out.value = Matrix(8, 10);
  p.b_out.value(0, Vocab::kEos) = 5.0;
  const Generation g = generate(p, std::vector<double>(8, 0.3), 11);
  EXPECT_TRUE(g.tokens.empty());
  EXPECT_FALSE(g.truncated);
}

TEST(Generate, TiesGoToLowestIndexAndTruncationIsFlagged) {
  DecoderParams p = small_decoder(10);
  p.w_out.value = Matrix(8, 10);
  p.b_out.value = Matrix(1, 10);
  p.b_out.value(0, 6) = 1.0;
  p.b_out.value(0, 7) = 1.0;
  const Generation g = generate(p, std::vector<double>(8, 0.0), 5);
  EXPECT_EQ(g.tokens, std::vector<int>(5, 6));
  EXPECT_TRUE(g.truncated);
}

TEST(Generate, Deterministic) {
  DecoderParams p = small_decoder(12, 9);
  const std::vector<double> mem = {0.1, -0.4, 0.9, 0.2, -0.7, 0.3, 0.05, -0.2};
  const Generation a = generate(p, mem, 11);
  const Generation b = generate(p, mem, 11);
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.truncated, b.truncated);
}

TEST(PlateauScheduler, HalvesAfterExactlyTenStagnantEpochs) {
  PlateauScheduler s(1e-3, 10);
  EXPECT_EQ(s.observe(1.0), 1e-3);
  for (int i = 1; i <= 9; ++i) EXPECT_EQ(s.observe(1.0), 1e-3) << "stagnant epoch " << i;
  EXPECT_EQ(s.observe(1.5), 5e-4);
  EXPECT_EQ(s.stagnant(), 0u);
  EXPECT_EQ(s.observe(0.5), 5e-4);
  for (int i = 1; i <= 9; ++i) EXPECT_EQ(s.observe(0.7), 5e-4);
  EXPECT_EQ(s.observe(0.7), 2.5e-4);
}

TEST(PlateauScheduler, ImprovementResetsTheCount) {
  PlateauScheduler s(1.0, 10);
  s.observe(1.0);
  for (int i = 0; i < 9; ++i) s.observe(2.0);
  EXPECT_EQ(s.observe(0.9), 1.0);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(s.observe(2.0), 1.0);
  EXPECT_EQ(s.observe(2.0), 0.5);
}

struct TinyCorpus {
  Model model;
  std::vector<Example> train, val;
};

TinyCorpus tiny_corpus(std::uint64_t seed, fusion::AblationFlags flags = {}) {
  const std::vector<std::string> smiles = {"CCO", "C=O", "CCN", "OCC=O", "CN", "NCCO"};
  TinyCorpus t;
  t.model = Model::init(Direction::kText2Mol, Vocab::smiles(smiles), tiny_dims(), flags, seed);
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    Example ex = make_example(t.model, "m" + std::to_string(i), smiles[i], 100 + i);
    (i < 4 ? t.train : t.val).push_back(std::move(ex));
  }
  return t;
}

TEST(ModelGradCheck, FullModelWithinTolerance) {
  for (const fusion::AblationFlags flags : {fusion::AblationFlags{}, fusion::AblationFlags{false, true, false, false},
                                            fusion::AblationFlags{false, false, false, true}}) {
    TinyCorpus t = tiny_corpus(11, flags);
    const std::vector<const Example*> batch = {&t.train[0], &t.train[3]};
    const num::ParamRefs refs = t.model.refs();
    const auto f = [&](Tape& tape) { return batch_loss(bind(tape, t.model), batch); };
    const num::GradCheckResult r = num::grad_check(f, refs, {1e-5, 100, 7});
    for (const num::BlockCheck& b : r.blocks) {
      // Blocks unused by the active path have zero gradients on both sides.
      EXPECT_LE(b.max_rel_error, 1e-4) << b.name;
    }
    EXPECT_LE(r.max_rel_error, 1e-4);
  }
}

TEST(Train, SameSeedGivesBitIdenticalParameters) {
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.epochs = 4;
  cfg.seed = 5;
  TinyCorpus a = tiny_corpus(1), b = tiny_corpus(1);
  std::ostringstream la, lb;
  train(a.model, a.train, a.val, cfg, {}, &la);
  train(b.model, b.train, b.val, cfg, {}, &lb);
  const num::ParamRefs ra = a.model.refs(), rb = b.model.refs();
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i]->value, rb[i]->value) << ra[i]->name;
  EXPECT_EQ(la.str(), lb.str());
}

TEST(Train, ReturnsTheValidationArgmin) {
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.epochs = 30;
  cfg.learning_rate = 3e-2;  // large enough that validation loss turns up
  cfg.patience = 0;
  TinyCorpus t = tiny_corpus(2);
  const TrainResult r = train(t.model, t.train, t.val, cfg);
  ASSERT_EQ(r.history.size(), 30u);
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (r.history[i].val_loss < r.history[argmin].val_loss) argmin = i;
  }
  EXPECT_EQ(r.best_epoch, argmin + 1);
  for (std::size_t i = 0; i < argmin; ++i) EXPECT_GE(r.history[i].val_loss, r.history[argmin].val_loss);
  EXPECT_EQ(mean_loss(t.model, t.val, cfg.batch_size), r.history[argmin].val_loss);
}

TEST(Train, LogHasOneJsonLinePerEpoch) {
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.epochs = 3;
  TinyCorpus t = tiny_corpus(3);
  std::ostringstream log;
  train(t.model, t.train, t.val, cfg, {}, &log);
  std::istringstream in(log.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_NE(line.find("\"epoch\":" + std::to_string(n)), std::string::npos) << line;
    EXPECT_NE(line.find("\"val_loss\""), std::string::npos);
    EXPECT_NE(line.find("\"lr\""), std::string::npos);
  }
  EXPECT_EQ(n, 3u);
}

TEST(Train, MaxStepsAndEarlyStopping) {
  TrainConfig cfg;
  cfg.batch_size = 1;
  cfg.epochs = 50;
  cfg.max_steps = 6;
  TinyCorpus t = tiny_corpus(4);
  TrainResult r = train(t.model, t.train, t.val, cfg);
  EXPECT_EQ(r.steps, 6u);
  EXPECT_EQ(r.history.size(), 2u);

  cfg.max_steps = 0;
  cfg.learning_rate = 0.5;
  cfg.patience = 3;
  TinyCorpus u = tiny_corpus(4);
  r = train(u.model, u.train, u.val, cfg);
  EXPECT_TRUE(r.early_stopped || r.diverged);
  EXPECT_LT(r.history.size(), 50u);
}

TEST(Train, RejectsBadConfig) {
  TinyCorpus t = tiny_corpus(5);
  TrainConfig cfg;
  cfg.batch_size = 0;
  EXPECT_THROW(train(t.model, t.train, t.val, cfg), ConfigError);
  cfg = {};
  cfg.lr_factor = 1.0;
  EXPECT_THROW(train(t.model, t.train, t.val, cfg), ConfigError);
  EXPECT_THROW(train(t.model, {}, t.val, TrainConfig{}), DataError);
}

TEST(Train, OverfitsASingleExample) {
  TinyCorpus t = tiny_corpus(6);
  ModelDims dims = tiny_dims();
  dims.d = 16;
  dims.head_dim = 8;
  t.model = Model::init(Direction::kText2Mol, t.model.vocab, dims, {}, 6);
  const std::vector<Example> one = {make_example(t.model, "x", "OCC=O", 77)};
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.learning_rate = 1e-2;
  cfg.monitor = Monitor::kTrain;
  cfg.patience = 0;
  const auto done = [&](const EpochRecord&, Model& m) { return predict(m, one[0].input).text == "OCC=O"; };
  const TrainResult r = train(t.model, one, {}, cfg, done);
  EXPECT_TRUE(r.stopped_by_callback) << "steps " << r.steps;
  EXPECT_EQ(predict(t.model, one[0].input).text, "OCC=O");
}

TEST(ModelIo, SaveLoadRoundTrip) {
  TinyCorpus t = tiny_corpus(8, {false, false, true, false});
  const auto path = std::filesystem::temp_directory_path() / "molgen_decoder_roundtrip.ckpt";
  save_model(path, t.model);
  Model back = load_model(path);
  EXPECT_EQ(back.vocab, t.model.vocab);
  EXPECT_EQ(back.direction, Direction::kText2Mol);
  EXPECT_EQ(back.flags, t.model.flags);
  const num::ParamRefs a = t.model.refs(), b = back.refs();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i]->value, b[i]->value) << a[i]->name;
  EXPECT_EQ(predict(back, t.val[0].input).text, predict(t.model, t.val[0].input).text);
  std::filesystem::remove(path);
}

TEST(ModelIo, Mol2TextHasNoPredictionStream) {
  const Vocab v = Vocab::characters({"An alcohol.", "A ketone."});
  Model m = Model::init(Direction::kMol2Text, v, tiny_dims(), {}, 1);
  EXPECT_FALSE(m.fusion.has_pred());
  const auto path = std::filesystem::temp_directory_path() / "molgen_decoder_m2t.ckpt";
  save_model(path, m);
  const Model back = load_model(path);
  EXPECT_EQ(back.direction, Direction::kMol2Text);
  EXPECT_EQ(back.vocab, v);
  EXPECT_FALSE(back.fusion.has_pred());
  std::filesystem::remove(path);
}

TEST(Direction, ParsesBothNames) {
  EXPECT_EQ(parse_direction("text2mol"), Direction::kText2Mol);
  EXPECT_EQ(to_string(parse_direction("mol2text")), "mol2text");
  EXPECT_THROW(parse_direction("both"), ConfigError);
}

}  // namespace
}  // namespace molgen::decoder
