pub mod classify;
pub mod lemma_check;
pub mod train_encoder;
pub mod verify_bounds;
