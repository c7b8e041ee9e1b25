//! Text frontend and evaluation toolkit for Indonesian-English
//! code-switching speech synthesis.
//!
//! The frontend ([`pipeline`]) normalizes a sentence, labels every word as
//! Indonesian or English ([`lid`]) and phonemizes each word with the rules of
//! its own language ([`g2p`]). Its output carries phones and word boundaries
//! only; language labels ride along as annotations and are never meant to
//! condition the acoustic model.
//!
//! The remaining modules support building and scoring experiments: training
//! data mixes ([`corpus`]), seven-case code-switching test sets and
//! semantically unpredictable sentences ([`testset`]), and WER, MOS, rank
//! and questionnaire-allocation tooling ([`eval`]).

pub mod corpus;
pub mod error;
pub mod eval;
pub mod g2p;
pub mod lid;
pub mod pipeline;
mod rng;
pub mod testset;
pub mod textnorm;

pub use error::{Error, Result};
pub use g2p::{G2p, PhoneInventory, PhoneSeq};
pub use lid::{classify_tokens, LanguageTag, LidBackend, LidModel, TaggedWord};
pub use pipeline::{phonemize_sentence, FrontendOutput};
pub use textnorm::{normalize, tokenize, Token, TokenKind};
