#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "molgen/decoder/model.hpp"

namespace molgen::decoder {

// Multiplies the learning rate by `factor` once `patience` consecutive
// observations fail to improve on the best loss, then starts counting again.
class PlateauScheduler {
 public:
  PlateauScheduler(double learning_rate, std::size_t patience, double factor = 0.5);

  // Returns the learning rate to use from now on.
  double observe(double loss);
  double learning_rate() const { return lr_; }
  std::size_t stagnant() const { return stagnant_; }

 private:
  double lr_;
  std::size_t patience_;
  double factor_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t stagnant_ = 0;
};

enum class Monitor { kValidation, kTrain };

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  double learning_rate = 1e-3;
  std::size_t plateau_epochs = 10;
  double lr_factor = 0.5;
  std::size_t patience = 25;  // early stop; 0 disables
  std::size_t max_steps = 0;  // 0 = no limit
  std::uint64_t seed = 0;
  // Loss driving the scheduler, early stopping and the best checkpoint.
  Monitor monitor = Monitor::kValidation;
};

// ConfigError for zero batch size, epochs or rate, or a factor outside (0, 1).
void validate(const TrainConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // rate used during this epoch
  std::size_t steps = 0;  // optimizer steps so far
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when no epoch completed
  std::size_t steps = 0;
  bool diverged = false;
  bool early_stopped = false;
  bool stopped_by_callback = false;
};

// Called after every epoch; returning true stops training and keeps the
// current parameters.
using EpochCallback = std::function<bool(const EpochRecord&, Model&)>;

// Adam over every fusion and decoder block with a seeded per-epoch shuffle.
// On return the model holds the parameters of the best monitored epoch (or
// the current ones after a callback stop). A non-finite training loss stops
// at once and restores the last best parameters, with diverged set.
// Each epoch appends {"epoch","train_loss","val_loss","lr"} as one JSON line to log.
TrainResult train(Model& model, const std::vector<Example>& train_set, const std::vector<Example>& val_set,
                  const TrainConfig& cfg, const EpochCallback& callback = {}, std::ostream* log = nullptr);

}  // namespace molgen::decoder
