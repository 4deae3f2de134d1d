#![allow(dead_code)]

pub mod golden;
pub mod oracles;
pub mod repo;
pub mod uniform;
