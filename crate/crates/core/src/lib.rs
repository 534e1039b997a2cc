pub mod automata;
pub mod groups;
pub mod knapsack;
pub mod oracle;
pub mod semilinear;
