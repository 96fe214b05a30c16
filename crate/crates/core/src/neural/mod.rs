//! Two-tower scoring network with hand-written gradients, its training
//! loops and the replay buffer used online.

mod dataset;
mod net;
mod replay;
mod train;

pub use dataset::{generate_offline_dataset, OfflineDataset, OfflineSample};
pub use net::{Forward, NeuralError, TwoTowerNet};
pub use replay::ReplayBuffer;
pub use train::{clip_gradient, online_replay_update, train_offline, TrainConfig, TrainReport};
