//! Concrete game families: one-pile Nim over a binary Hamming channel,
//! multi-pile Nim with an equiprobable channel, and Chomp! with
//! neighbourhood error models.

pub mod chomp;
pub mod nim;

pub use chomp::{chomp_graph, chomp_model, ChompBoard, ChompPosition, ChompVariant};
pub use nim::{
    bit_length, hamming, hamming_row, nim1_graph, nim1_model, nim1_solution_curve, nim_multi_expected_class,
    nim_multi_graph, nim_multi_positions, CurvePoint,
};
