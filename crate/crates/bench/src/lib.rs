//! Shared workloads for the criterion benches.

use csfront::lid::LidConfig;
use csfront::LidModel;

const ID_SENTENCES: &[&str] = &[
    "saya mau makan nasi goreng di warung dekat rumah",
    "kemarin kami pergi ke pasar untuk membeli sayur",
    "ibu sedang memasak sayur asem di dapur",
    "adik belajar membaca buku cerita sebelum tidur",
    "mereka bermain bola di lapangan setiap sore",
    "kucing itu tidur di atas meja makan",
];

const EN_SENTENCES: &[&str] = &[
    "the meeting starts right after lunch",
    "please send me the report before friday",
    "we need a better deployment pipeline",
    "my laptop battery drains very quickly",
    "the weather is really nice this weekend",
    "she is reading a book about machine learning",
];

const MIXED: &[&str] = &[
    "Saya suka coding di malam hari.",
    "Besok ada meeting jam 10, jangan lupa ya!",
    "Deadline project ini minggu depan, tapi laptop saya rusak.",
    "Kita harus update software sebelum weekend.",
    "Tolong kirim file presentation itu ke email saya.",
    "Dia sangat excited dengan job baru di startup itu.",
];

/// `n` code-switched sentences, cycling through a fixed list.
pub fn mixed_sentences(n: usize) -> Vec<String> {
    MIXED.iter().cycle().take(n).map(|s| s.to_string()).collect()
}

/// A small built-in LID model trained on the sample sentences.
pub fn small_model() -> LidModel {
    let id: Vec<String> = ID_SENTENCES.iter().map(|s| s.to_string()).collect();
    let en: Vec<String> = EN_SENTENCES.iter().map(|s| s.to_string()).collect();
    LidModel::train(&id, &en, &[], LidConfig::default()).expect("sample corpus is non-empty")
}
