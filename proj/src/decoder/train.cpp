#include "molgen/decoder/train.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "molgen/error.hpp"
#include "molgen/numcore/optim.hpp"

namespace molgen::decoder {
namespace {

std::vector<num::Matrix> snapshot(const num::ParamRefs& refs) {
  std::vector<num::Matrix> out;
  out.reserve(refs.size());
  for (const num::Parameter* p : refs) out.push_back(p->value);
  return out;
}

void restore(const num::ParamRefs& refs, const std::vector<num::Matrix>& values) {
  for (std::size_t i = 0; i < refs.size(); ++i) refs[i]->value = values[i];
}

std::size_t token_count(const Example& ex) {
  std::size_t n = 0;
  for (int t : ex.target) n += t != Vocab::kPad;
  return n;
}

}  // namespace

PlateauScheduler::PlateauScheduler(double learning_rate, std::size_t patience, double factor)
    : lr_(learning_rate), patience_(patience), factor_(factor) {}

double PlateauScheduler::observe(double loss) {
  if (loss < best_) {
    best_ = loss;
    stagnant_ = 0;
    return lr_;
  }
  if (++stagnant_ >= patience_) {
    lr_ *= factor_;
    stagnant_ = 0;
  }
  return lr_;
}

void validate(const TrainConfig& cfg) {
  if (cfg.batch_size == 0) throw ConfigError("batch_size must be positive");
  if (cfg.epochs == 0) throw ConfigError("epochs must be positive");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning_rate must be a positive number");
  }
  if (cfg.plateau_epochs == 0) throw ConfigError("plateau_epochs must be positive");
  if (!(cfg.lr_factor > 0.0 && cfg.lr_factor < 1.0)) throw ConfigError("lr_factor must lie in (0, 1)");
}

TrainResult train(Model& model, const std::vector<Example>& train_set, const std::vector<Example>& val_set,
                  const TrainConfig& cfg, const EpochCallback& callback, std::ostream* log) {
  validate(cfg);
  if (train_set.empty()) throw DataError("training split is empty");
  if (val_set.empty() && cfg.monitor == Monitor::kValidation) throw DataError("validation split is empty");

  const num::ParamRefs refs = model.refs();
  num::Adam adam({cfg.learning_rate});
  PlateauScheduler scheduler(cfg.learning_rate, cfg.plateau_epochs, cfg.lr_factor);
  TrainResult result;
  std::vector<num::Matrix> best = snapshot(refs);
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(mix_seed(cfg.seed, epoch));
    std::vector<std::size_t> perm = order;
    rng.shuffle(perm);

    const double lr = adam.learning_rate();
    double loss_sum = 0.0;
    std::size_t tokens = 0;
    for (std::size_t start = 0; start < perm.size(); start += cfg.batch_size) {
      if (cfg.max_steps > 0 && result.steps >= cfg.max_steps) break;
      std::vector<const Example*> batch;
      std::size_t n = 0;
      for (std::size_t i = start; i < std::min(perm.size(), start + cfg.batch_size); ++i) {
        batch.push_back(&train_set[perm[i]]);
        n += token_count(train_set[perm[i]]);
      }
      for (num::Parameter* p : refs) p->zero_grad();
      num::Tape tape;
      const BoundModel bound = bind(tape, model);
      const num::Var loss = batch_loss(bound, batch);
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        restore(refs, best);
        result.diverged = true;
        return result;
      }
      tape.backward(loss);
      adam.step(refs);
      ++result.steps;
      loss_sum += value * static_cast<double>(n);
      tokens += n;
    }
    if (tokens == 0) break;  // step budget exhausted before this epoch

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(tokens);
    rec.val_loss = val_set.empty() ? std::nan("") : mean_loss(model, val_set, cfg.batch_size);
    rec.lr = lr;
    rec.steps = result.steps;
    result.history.push_back(rec);
    if (log) {
      nlohmann::json line = {{"epoch", rec.epoch}, {"train_loss", rec.train_loss}, {"lr", rec.lr}};
      line["val_loss"] = std::isfinite(rec.val_loss) ? nlohmann::json(rec.val_loss) : nlohmann::json(nullptr);
      *log << line.dump() << "\n";
    }

    // The train monitor uses the loss measured during the epoch, one update
    // behind the snapshot it selects.
    const double monitored = cfg.monitor == Monitor::kValidation ? rec.val_loss : rec.train_loss;
    if (!std::isfinite(monitored)) {
      restore(refs, best);
      result.diverged = true;
      return result;
    }
    if (monitored < best_loss) {
      best_loss = monitored;
      best = snapshot(refs);
      result.best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
    }
    adam.set_learning_rate(scheduler.observe(monitored));

    if (callback && callback(rec, model)) {
      result.stopped_by_callback = true;
      result.best_epoch = epoch;
      return result;
    }
    if (cfg.patience > 0 && since_best >= cfg.patience) {
      result.early_stopped = true;
      break;
    }
    if (cfg.max_steps > 0 && result.steps >= cfg.max_steps) break;
  }
  restore(refs, best);
  return result;
}

}  // namespace molgen::decoder
