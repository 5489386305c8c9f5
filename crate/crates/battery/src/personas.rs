//! Built-in calibrated fixture sets.
//!
//! Five persona streams (91 entries) plus a production-shaped stream
//! (68 entries, 36 of them intervention-enabled). Every field below is
//! deliberate: levels, window interactions, tag quotas, and sentiment
//! aggregates are pinned by the acceptance suite, so edits here almost
//! always break a frozen number somewhere.

use crate::fixture::{BatterySet, FixtureEntry, GuardSpec, PersonaFixture, PersonaId, Variant};
use slipgate_core::{EthicsTag, Severity, Spectrum, TagOrigin};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

fn entry(persona: &str, day: u32, a: f64, m: f64, sentiment: f64, tone: &str, text: &str) -> FixtureEntry {
    FixtureEntry {
        persona: persona.into(),
        day,
        a,
        m,
        sentiment,
        tone: tone.into(),
        emotions: band_emotions(tone).iter().map(|s| s.to_string()).collect(),
        text: text.into(),
        tags: Vec::new(),
        guard: GuardSpec::default(),
        classification: None,
        slip: true,
    }
}

fn band_emotions(tone: &str) -> &'static [&'static str] {
    match tone {
        "happy" => &["joy", "energy"],
        "calm" => &["contentment", "ease"],
        "reflective" => &["curiosity", "nostalgia"],
        "tense" => &["worry", "restlessness"],
        "sad" => &["sadness", "fatigue"],
        _ => &["despair", "hopelessness"],
    }
}

fn band_tone(sentiment: f64) -> &'static str {
    if sentiment >= 72.0 {
        "happy"
    } else if sentiment >= 58.0 {
        "calm"
    } else if sentiment >= 48.0 {
        "reflective"
    } else if sentiment >= 38.0 {
        "tense"
    } else {
        "sad"
    }
}

fn band_text(tone: &str, day: u32) -> &'static str {
    const HAPPY: [&str; 3] = [
        "오늘은 일이 술술 풀렸다. 기분이 좋다.",
        "새로운 아이디어가 계속 떠오른다.",
        "하루 종일 에너지가 넘쳤다.",
    ];
    const CALM: [&str; 3] = [
        "차분하게 하루를 보냈다.",
        "저녁 산책을 하며 생각을 정리했다.",
        "무난한 하루였다.",
    ];
    const REFLECTIVE: [&str; 3] = [
        "요즘의 나를 돌아보게 된다.",
        "일기를 쓰며 마음을 정리했다.",
        "오늘은 생각이 많았다.",
    ];
    const TENSE: [&str; 3] = [
        "마음이 조금 무겁다.",
        "일이 손에 잡히지 않는다.",
        "괜히 불안한 하루였다.",
    ];
    const SAD: [&str; 3] = [
        "기운이 없고 지친다.",
        "아무것도 하기 싫은 하루였다.",
        "마음이 가라앉는다.",
    ];
    let i = (day as usize) % 3;
    match tone {
        "happy" => HAPPY[i],
        "calm" => CALM[i],
        "reflective" => REFLECTIVE[i],
        "tense" => TENSE[i],
        _ => SAD[i],
    }
}

fn pre(name: &str) -> EthicsTag {
    let (spectrum, severity) = match name {
        "reflection" | "connection" | "growth" | "resilience" | "gratitude" | "vitality" => {
            (Spectrum::Positive, Severity::Normal)
        }
        "exhaustion" | "uncertainty" => (Spectrum::Negative, Severity::Normal),
        "overwhelm" | "isolation" | "hopelessness" | "anxiety" => {
            (Spectrum::Negative, Severity::Warning)
        }
        other => panic!("not a predefined tag: {other}"),
    };
    EthicsTag::new(name, spectrum, severity, TagOrigin::Predefined).expect("valid predefined tag")
}

fn crisis_suicide() -> EthicsTag {
    EthicsTag::new("crisis_suicide", Spectrum::Negative, Severity::Crisis, TagOrigin::Predefined)
        .expect("valid crisis tag")
}

fn self_harm() -> EthicsTag {
    EthicsTag::new("self-harm", Spectrum::Negative, Severity::Dangerous, TagOrigin::Predefined)
        .expect("valid dangerous tag")
}

fn custom(name: &str) -> EthicsTag {
    let negative = matches!(
        name,
        "meaning-crisis" | "holding-on" | "heavy-morning" | "shaky-focus" | "low-tide"
    );
    let spectrum = if negative { Spectrum::Negative } else { Spectrum::Positive };
    EthicsTag::new(name, spectrum, Severity::Normal, TagOrigin::Custom).expect("valid custom tag")
}

/// Behavioral elevation tag (honored as warning only when enabled).
fn elevation(name: &str) -> EthicsTag {
    EthicsTag::new(name, Spectrum::Negative, Severity::Warning, TagOrigin::Custom)
        .expect("valid elevation tag")
}

// ---------------------------------------------------------------------------
// Persona A — elevated-energy profile, 30 daily entries.
//
// Days 9-16 are the elevated episode: metrics stay sub-threshold (a <= 4.0)
// with high sentiment, so the base pipeline sees nothing. Day 20 is the
// post-episode crash (confirmed crisis -> hard); days 21-26 ride vigilance.
// ---------------------------------------------------------------------------

fn persona_a(variant: Variant) -> Vec<FixtureEntry> {
    let t = |tone: &str, day: u32| band_text(tone, day);
    let mut days = vec![
        entry("A", 1, 3.4, 3.1, 62.0, "calm", t("calm", 1))
            .with_tags(vec![pre("reflection"), pre("connection")]),
        entry("A", 2, 3.6, 3.3, 65.0, "calm", t("calm", 2))
            .with_tags(vec![pre("reflection"), pre("growth")]),
        entry("A", 3, 2.6, 1.8, 48.0, "reflective", "느리게 흘러간 하루. 손에 잡히는 게 없었다.")
            .with_tags(vec![pre("reflection"), pre("exhaustion")])
            .with_classification("low-engagement", 0.72),
        entry("A", 4, 3.2, 3.0, 58.0, "calm", t("calm", 4))
            .with_tags(vec![pre("reflection"), pre("uncertainty")]),
        entry("A", 5, 3.5, 3.4, 64.0, "calm", t("calm", 5))
            .with_tags(vec![pre("connection"), pre("growth")]),
        entry("A", 6, 1.9, 2.6, 45.0, "tense", "몸이 무거워서 거의 누워만 있었다.")
            .with_tags(vec![pre("exhaustion"), pre("uncertainty")])
            .with_classification("low-engagement", 0.76),
        entry("A", 7, 3.3, 3.2, 60.0, "calm", t("calm", 7))
            .with_tags(vec![pre("reflection"), pre("resilience")]),
        entry("A", 8, 3.7, 3.5, 66.0, "calm", t("calm", 8))
            .with_tags(vec![pre("growth"), pre("vitality")]),
        // --- elevated episode, days 9-16 ---
        entry("A", 9, 3.7, 4.0, 74.0, "happy", "밤 늦게까지 계획을 세웠다. 전혀 피곤하지 않다.")
            .with_tags(vec![pre("vitality"), pre("growth")]),
        entry("A", 10, 3.8, 4.1, 75.0, "happy", "새 프로젝트 세 개를 동시에 시작했다.")
            .with_tags(vec![pre("vitality"), pre("growth"), custom("creative-surge")]),
        entry("A", 11, 3.8, 4.2, 76.0, "happy", "아이디어가 멈추지 않는다. 잠은 네 시간이면 충분하다.")
            .with_tags(vec![pre("growth"), pre("vitality")]),
        entry("A", 12, 3.9, 4.2, 77.0, "happy", "오늘도 새벽까지 작업. 말이 빨라진다는 얘기를 들었다.")
            .with_tags(vec![pre("vitality"), pre("reflection")]),
        entry("A", 13, 3.9, 4.3, 78.0, "happy", "장비를 잔뜩 주문했다. 다 필요한 것들이다.")
            .with_tags(vec![pre("vitality"), pre("growth"), custom("creative-surge")]),
        entry("A", 14, 4.0, 4.4, 79.0, "happy",
            "잠을 두 시간밖에 못 잤는데 전혀 피곤하지 않다. 오늘 50만원을 질렀다. 유튜브 구독자 10만 명도 가능할 것 같다.")
            .with_tags(vec![pre("vitality"), pre("growth"), custom("flow-state")]),
        entry("A", 15, 4.0, 4.3, 78.0, "happy", "약은 당분간 끊기로 했다. 지금 컨디션이면 필요 없다.")
            .with_tags(vec![pre("vitality"), pre("connection")]),
        entry("A", 16, 3.9, 4.2, 76.0, "happy", "쉬지 않고 달리는 중. 모두가 내 계획을 들어야 한다.")
            .with_tags(vec![pre("vitality"), pre("growth")]),
        // --- decline ---
        entry("A", 17, 2.4, 1.9, 45.0, "tense", "갑자기 모든 게 버겁게 느껴진다.")
            .with_tags(vec![pre("exhaustion"), pre("uncertainty")])
            .with_classification("low-engagement", 0.81),
        entry("A", 18, 2.6, 2.4, 40.0, "tense", t("tense", 18))
            .with_tags(vec![pre("exhaustion"), pre("uncertainty")]),
        entry("A", 19, 1.8, 2.2, 33.0, "sad", "며칠째 잠만 잔다. 아무 의욕이 없다.")
            .with_tags(vec![pre("exhaustion"), pre("hopelessness")])
            .with_classification("low-engagement", 0.84),
        // --- crash ---
        entry("A", 20, 1.4, 1.3, 25.0, "crisis", "왜 살아있는지 모르겠어")
            .with_emotions(&["despair", "hopelessness"])
            .with_tags(vec![crisis_suicide(), pre("hopelessness"), pre("exhaustion")])
            .with_guard_flags(true, true),
        // --- recovery under vigilance ---
        entry("A", 21, 2.8, 2.5, 30.0, "sad", t("sad", 21))
            .with_tags(vec![pre("exhaustion"), pre("reflection")]),
        entry("A", 22, 2.9, 2.6, 33.0, "sad", t("sad", 22))
            .with_tags(vec![pre("reflection"), pre("exhaustion")]),
        entry("A", 23, 3.0, 2.7, 36.0, "sad", t("sad", 23))
            .with_tags(vec![pre("reflection"), pre("uncertainty")]),
        entry("A", 24, 3.0, 2.8, 39.0, "tense", t("tense", 24))
            .with_tags(vec![pre("reflection"), pre("uncertainty")]),
        entry("A", 25, 3.1, 2.9, 42.0, "tense", t("tense", 25))
            .with_tags(vec![pre("reflection"), pre("resilience")]),
        entry("A", 26, 3.1, 3.0, 45.0, "tense", t("tense", 26))
            .with_tags(vec![pre("reflection"), pre("resilience")]),
        entry("A", 27, 3.2, 3.0, 48.0, "reflective", t("reflective", 27))
            .with_tags(vec![pre("reflection"), pre("resilience")]),
        entry("A", 28, 3.3, 3.1, 52.0, "reflective", t("reflective", 28))
            .with_tags(vec![pre("reflection"), pre("growth")]),
        entry("A", 29, 3.4, 3.2, 55.0, "reflective", t("reflective", 29))
            .with_tags(vec![pre("connection"), pre("growth")]),
        entry("A", 30, 3.4, 3.3, 58.0, "calm", t("calm", 30))
            .with_tags(vec![pre("reflection"), pre("connection")]),
    ];

    match variant {
        Variant::Base => {}
        // Weaker classifier: behavioral tags appear on five elevated days,
        // metrics unchanged.
        Variant::TagsWeak => {
            let tagged = [
                (9u32, "sleep-energy-paradox"),
                (11, "impulsive-spending"),
                (13, "grandiosity"),
                (15, "sleep-energy-paradox"),
                (16, "grandiosity"),
            ];
            for (day, name) in tagged {
                let e = &mut days[day as usize - 1];
                e.tags.push(elevation(name));
            }
        }
        // Strongest classifier: four elevated days cross the rule-2
        // thresholds (with a non-release pattern holding the flag), two more
        // carry behavioral tags; days 11 and 14 stay undetected.
        Variant::TagsStrong => {
            let r2 = [
                (9u32, 4.6, 4.6, 0.84),
                (10, 4.5, 4.7, 0.86),
                (13, 4.7, 4.6, 0.88),
                (15, 4.6, 4.8, 0.85),
            ];
            for (day, a, m, conf) in r2 {
                let e = &mut days[day as usize - 1];
                e.a = a;
                e.m = m;
                e.classification = Some(crate::fixture::ClassificationSpec {
                    pattern: "elevated-energy".into(),
                    confidence: conf,
                    reasoning: String::new(),
                });
            }
            for (day, name) in [(12u32, "impulsive-spending"), (16, "grandiosity")] {
                let e = &mut days[day as usize - 1];
                e.tags.push(elevation(name));
            }
        }
    }
    days
}

// ---------------------------------------------------------------------------
// Persona B — trauma-related profile, 31 entries every other day.
//
// Chronic low state: most days are soft via low metrics or warning tags.
// The alternate-day spacing keeps every 7-day window at four entries or
// fewer, so the stream monitors as graduated rather than cascading to hard.
// Two entries carry indirect ideation phrasing that no layer flags; the
// single hard is a dangerous self-harm tag on the final entry.
// ---------------------------------------------------------------------------

fn persona_b(_variant: Variant) -> Vec<FixtureEntry> {
    // (day, a, m, sentiment, tags, classification confidence or None)
    struct Row {
        day: u32,
        a: f64,
        m: f64,
        sent: f64,
        tags: Vec<EthicsTag>,
        class: Option<f64>,
        text: Option<&'static str>,
        emotions: Option<&'static [&'static str]>,
    }
    fn row(day: u32, a: f64, m: f64, sent: f64, tags: Vec<EthicsTag>, class: Option<f64>) -> Row {
        Row {
            day,
            a,
            m,
            sent,
            tags,
            class,
            text: None,
            emotions: None,
        }
    }
    let mut rows = vec![
        row(1, 3.1, 2.9, 55.0, vec![pre("reflection"), pre("uncertainty")], None),
        row(3, 1.9, 2.6, 38.0, vec![pre("exhaustion"), pre("isolation")], Some(0.74)),
        row(5, 2.8, 2.6, 42.0, vec![pre("isolation"), pre("exhaustion")], None),
        row(7, 1.8, 1.9, 35.0, vec![pre("exhaustion"), pre("uncertainty")], Some(0.78)),
        row(9, 3.0, 3.1, 52.0, vec![pre("reflection"), pre("connection")], None),
        row(11, 2.9, 2.7, 40.0, vec![pre("anxiety"), pre("uncertainty")], None),
        row(13, 1.7, 2.4, 33.0, vec![pre("exhaustion"), pre("hopelessness")], Some(0.80)),
        row(15, 2.7, 2.5, 38.0, vec![pre("isolation"), pre("exhaustion")], None),
        row(17, 3.2, 3.0, 56.0, vec![pre("reflection"), pre("growth")], None),
        row(19, 1.9, 2.2, 36.0, vec![pre("exhaustion"), pre("uncertainty")], None),
        row(21, 2.6, 2.4, 37.0, vec![pre("hopelessness"), pre("exhaustion")], None),
        row(23, 1.6, 2.3, 28.0, vec![pre("hopelessness"), pre("exhaustion")], Some(0.82)),
        row(25, 2.8, 2.7, 39.0, vec![pre("anxiety"), pre("uncertainty")], None),
        row(27, 1.8, 2.5, 34.0, vec![pre("exhaustion"), pre("isolation")], Some(0.77)),
        row(29, 2.7, 2.6, 41.0, vec![pre("overwhelm"), pre("exhaustion")], None),
        row(31, 1.9, 1.8, 32.0, vec![pre("exhaustion"), pre("hopelessness")], Some(0.79)),
        row(33, 3.1, 3.2, 54.0, vec![pre("reflection"), pre("resilience")], None),
        row(35, 2.9, 2.8, 40.0, vec![pre("isolation"), pre("uncertainty")], None),
        row(37, 1.7, 2.2, 30.0, vec![pre("exhaustion"), pre("hopelessness")], Some(0.83)),
        row(39, 1.5, 2.1, 26.0, vec![pre("hopelessness"), pre("exhaustion")], Some(0.85)),
        row(41, 2.6, 2.5, 36.0, vec![pre("anxiety"), pre("exhaustion")], None),
        row(43, 1.9, 2.4, 38.0, vec![pre("exhaustion"), pre("uncertainty")], None),
        row(45, 2.8, 2.6, 42.0, vec![pre("overwhelm"), pre("uncertainty")], None),
        row(47, 3.0, 3.0, 50.0, vec![pre("reflection"), pre("connection")], None),
        row(49, 1.8, 2.3, 35.0, vec![pre("exhaustion"), pre("isolation")], Some(0.76)),
        row(51, 2.7, 2.7, 39.0, vec![pre("hopelessness"), pre("uncertainty")], None),
        row(53, 1.6, 1.9, 29.0, vec![pre("exhaustion"), pre("hopelessness")], Some(0.81)),
        row(55, 2.9, 2.6, 43.0, vec![pre("isolation"), pre("exhaustion")], None),
        row(57, 1.7, 2.5, 31.0, vec![pre("exhaustion"), pre("uncertainty")], Some(0.74)),
        row(59, 2.8, 2.5, 37.0, vec![pre("anxiety"), pre("hopelessness")], None),
        row(61, 1.9, 2.0, 22.0, vec![self_harm(), pre("hopelessness"), pre("exhaustion")], None),
    ];

    // Indirect ideation phrasing that evades every detection layer.
    rows[11].text = Some("내일 아침이 안 왔으면");
    rows[19].text = Some("이렇게는 못 살겠어");
    rows[30].text = Some("오늘 스스로를 아프게 했다.");
    rows[30].emotions = Some(&["despair", "sadness"]);

    rows.into_iter()
        .map(|r| {
            let tone = band_tone(r.sent);
            let text = r.text.unwrap_or_else(|| band_text(tone, r.day));
            let mut e = entry("B", r.day, r.a, r.m, r.sent, tone, text).with_tags(r.tags);
            if let Some(emotions) = r.emotions {
                e = e.with_emotions(emotions);
            }
            if let Some(conf) = r.class {
                e = e.with_classification("low-engagement", conf);
            }
            e
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Persona C — healthy flow, 10 daily entries, all released-free nones.
// Metrics stay below every rule boundary; sentiment 72-82.
// ---------------------------------------------------------------------------

fn persona_c(variant: Variant) -> Vec<FixtureEntry> {
    let rows: [(u32, f64, f64, f64, [&str; 2], Option<&str>); 10] = [
        (1, 3.6, 3.2, 74.0, ["vitality", "reflection"], None),
        (2, 3.8, 3.6, 76.0, ["vitality", "growth"], Some("flow-state")),
        (3, 3.7, 3.4, 73.0, ["reflection", "connection"], None),
        (4, 4.0, 3.8, 78.0, ["vitality", "growth"], Some("flow-state")),
        (5, 3.9, 3.5, 75.0, ["connection", "gratitude"], None),
        (6, 4.4, 4.3, 82.0, ["vitality", "growth"], Some("flow-state")),
        (7, 3.8, 3.3, 74.0, ["reflection", "gratitude"], None),
        (8, 4.2, 4.0, 80.0, ["vitality", "connection"], Some("flow-state")),
        (9, 3.7, 3.2, 72.0, ["growth", "gratitude"], None),
        (10, 4.1, 3.9, 79.0, ["vitality", "reflection"], Some("flow-state")),
    ];
    rows.iter()
        .map(|&(day, a, m, sent, names, custom_name)| {
            let mut tags: Vec<EthicsTag> = names.iter().map(|n| pre(n)).collect();
            if let Some(name) = custom_name {
                tags.push(custom(name));
            }
            // The deepest-absorption day picks up a spurious behavioral tag
            // under the weaker classifier.
            if variant == Variant::TagsWeak && day == 6 {
                tags.push(elevation("grandiosity"));
            }
            entry("C", day, a, m, sent, "happy", "몰입해서 작업한 하루. 결과물이 마음에 든다.")
                .with_tags(tags)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Persona D — crisis trajectory, 10 daily entries with a decline into
// confirmed ideation. Two of the five ideation texts carry a listed
// keyword; the other three are phrased indirectly and only the assigned
// tags catch them.
// ---------------------------------------------------------------------------

fn persona_d(_variant: Variant) -> Vec<FixtureEntry> {
    let ideation_tags = || vec![crisis_suicide(), pre("hopelessness"), pre("exhaustion")];
    vec![
        entry("D", 1, 3.2, 3.0, 55.0, "reflective", band_text("reflective", 1))
            .with_tags(vec![pre("reflection"), pre("uncertainty")]),
        entry("D", 2, 3.0, 2.8, 50.0, "reflective", band_text("reflective", 2))
            .with_tags(vec![pre("uncertainty"), pre("exhaustion")]),
        entry("D", 3, 2.8, 2.6, 46.0, "tense", band_text("tense", 3))
            .with_tags(vec![pre("exhaustion"), pre("uncertainty")]),
        entry("D", 4, 2.5, 2.3, 42.0, "tense", band_text("tense", 4))
            .with_tags(vec![pre("exhaustion"), pre("uncertainty"), pre("connection")]),
        entry("D", 5, 1.9, 2.4, 35.0, "sad", "하루 종일 연락을 다 끊고 있었다.")
            .with_tags(vec![pre("exhaustion"), pre("isolation")])
            .with_classification("low-engagement", 0.78),
        entry("D", 6, 1.7, 1.9, 28.0, "crisis", "사라지고 싶다는 생각이 들었다.")
            .with_tags(ideation_tags())
            .with_guard_flags(true, true),
        entry("D", 7, 1.5, 1.7, 25.0, "crisis", "자살이라는 단어가 머릿속을 떠나지 않는다.")
            .with_tags(ideation_tags())
            .with_guard_flags(true, true),
        entry("D", 8, 1.4, 1.5, 22.0, "crisis", "아무것도 의미가 없는 것 같다.")
            .with_tags(ideation_tags())
            .with_guard_flags(true, true),
        entry("D", 9, 1.2, 1.3, 18.0, "crisis", "죽고 싶다는 생각뿐이다.")
            .with_tags(ideation_tags())
            .with_guard_flags(true, true),
        entry("D", 10, 1.0, 1.0, 15.0, "crisis", "더는 버틸 수가 없다.")
            .with_tags(ideation_tags())
            .with_guard_flags(true, true),
    ]
}

// ---------------------------------------------------------------------------
// Persona E — ordinary journaling, 10 daily entries. Two benign softs: one
// rule-5 low day, one anxiety-tag promotion.
// ---------------------------------------------------------------------------

fn persona_e(_variant: Variant) -> Vec<FixtureEntry> {
    vec![
        entry("E", 1, 3.3, 3.1, 62.0, "calm", band_text("calm", 1))
            .with_tags(vec![pre("reflection"), pre("connection")]),
        entry("E", 2, 3.5, 3.3, 66.0, "calm", band_text("calm", 2))
            .with_tags(vec![pre("reflection"), pre("growth"), custom("quiet-evening")]),
        entry("E", 3, 3.2, 3.0, 58.0, "calm", band_text("calm", 3))
            .with_tags(vec![pre("connection"), pre("gratitude")]),
        entry("E", 4, 1.8, 3.2, 48.0, "reflective", "종일 피곤해서 집에만 있었다.")
            .with_tags(vec![pre("exhaustion"), pre("reflection")])
            .with_classification("low-engagement", 0.74),
        entry("E", 5, 3.4, 3.2, 63.0, "calm", band_text("calm", 5))
            .with_tags(vec![pre("reflection"), pre("resilience")]),
        entry("E", 6, 3.6, 3.4, 67.0, "calm", band_text("calm", 6))
            .with_tags(vec![pre("growth"), pre("connection")]),
        entry("E", 7, 3.3, 3.1, 60.0, "calm", band_text("calm", 7))
            .with_tags(vec![pre("reflection"), pre("gratitude")]),
        entry("E", 8, 2.9, 2.7, 47.0, "tense", "발표가 다가와서 마음이 조마조마하다.")
            .with_tags(vec![pre("anxiety"), pre("uncertainty")]),
        entry("E", 9, 3.4, 3.3, 64.0, "calm", band_text("calm", 9))
            .with_tags(vec![pre("reflection"), pre("connection")]),
        entry("E", 10, 3.5, 3.4, 65.0, "calm", band_text("calm", 10))
            .with_tags(vec![pre("growth"), pre("reflection")]),
    ]
}

/// The calibrated five-persona battery for one variant.
pub fn builtin_battery(variant: Variant) -> BatterySet {
    let personas = vec![
        PersonaFixture {
            persona: PersonaId::A,
            variant,
            entries: persona_a(variant),
        },
        PersonaFixture {
            persona: PersonaId::B,
            variant,
            entries: persona_b(variant),
        },
        PersonaFixture {
            persona: PersonaId::C,
            variant,
            entries: persona_c(variant),
        },
        PersonaFixture {
            persona: PersonaId::D,
            variant,
            entries: persona_d(variant),
        },
        PersonaFixture {
            persona: PersonaId::E,
            variant,
            entries: persona_e(variant),
        },
    ];
    BatterySet { variant, personas }
}

// ---------------------------------------------------------------------------
// Production-shaped stream: 68 entries over 10 users, intervention output
// enabled for the first six users (36 entries). Index layout:
//   0..=31  enabled, final none  (index 0 = phantom-keyword case,
//                                 1..=5 = released rule-2 flow entries)
//   32..=35 enabled, final soft  (32-33 rule-driven, 34-35 tag-promoted)
//   36..=67 disabled (tags and alerts only)
// Predefined tags are assigned by index band so the corpus-level counts
// are exact; custom tags are pinned per index.
// ---------------------------------------------------------------------------

const ENABLED_NONE_SENTIMENTS: [f64; 32] = [
    85.0, 84.0, 82.0, 79.0, 78.0, 76.0, 72.0, 70.0, 68.0, 67.0, 66.0, 65.0, 63.0, 62.0, 61.0,
    60.0, 58.0, 57.0, 55.0, 54.0, 53.0, 52.0, 51.0, 50.0, 48.0, 47.0, 46.0, 45.0, 42.0, 40.0,
    35.0, 30.0,
];
const ENABLED_SOFT_SENTIMENTS: [f64; 4] = [44.0, 42.0, 39.0, 35.0];
const DISABLED_SENTIMENTS: [f64; 32] = [
    70.0, 68.0, 66.0, 64.0, 62.0, 60.0, 58.0, 56.0, 54.0, 52.0, 50.0, 49.0, 48.0, 47.0, 46.0,
    45.0, 44.0, 43.0, 42.0, 41.0, 40.0, 39.0, 38.0, 37.0, 36.0, 35.0, 34.0, 33.0, 32.0, 31.0,
    30.0, 29.0,
];

fn production_customs(idx: usize) -> &'static [&'static str] {
    match idx {
        1 | 2 | 4 => &["flow-state"],
        3 | 5 => &["creative-surge"],
        6 | 10 | 14 | 20 | 37 | 41 | 50 | 56 | 62 => &["self-care"],
        7 | 11 | 21 | 38 | 46 | 51 | 57 | 63 => &["sensitivity"],
        8 | 15 | 22 | 39 | 52 | 58 | 64 => &["grounding"],
        48 => &["meaning-crisis"],
        49 => &["pet-comfort"],
        9 => &["small-win"],
        12 => &["night-walk"],
        13 => &["deep-focus"],
        16 => &["quiet-pride"],
        17 => &["old-friend"],
        18 => &["slow-morning"],
        19 => &["new-recipe"],
        23 => &["rest-day"],
        24 => &["warm-tea"],
        25 => &["page-one"],
        26 => &["long-shower"],
        36 => &["open-window"],
        40 => &["short-walk"],
        42 => &["holding-on"],
        43 => &["small-step"],
        44 => &["dim-light"],
        45 => &["heavy-morning"],
        47 => &["shaky-focus"],
        53 => &["steady-breath"],
        54 => &["soft-landing"],
        55 => &["tiny-spark"],
        59 => &["low-tide"],
        60 => &["clean-desk"],
        61 => &["first-frost"],
        65 => &["quiet-win"],
        66 => &["night-writing"],
        67 => &["slow-recovery"],
        _ => &[],
    }
}

fn production_predefined(idx: usize) -> Vec<EthicsTag> {
    let mut tags = Vec::new();
    let mut push_if = |cond: bool, name: &str| {
        if cond {
            tags.push(pre(name));
        }
    };
    push_if(idx <= 44, "reflection");
    push_if(idx <= 30, "connection");
    push_if(idx <= 5, "gratitude");
    push_if(idx <= 5, "vitality");
    push_if((49..=67).contains(&idx), "growth");
    push_if((50..=67).contains(&idx), "resilience");
    push_if((27..=48).contains(&idx), "exhaustion");
    push_if((29..=47).contains(&idx), "uncertainty");
    push_if((36..=43).contains(&idx), "overwhelm");
    push_if(matches!(idx, 35 | 44 | 45), "isolation");
    push_if(matches!(idx, 34 | 46 | 47), "anxiety");
    push_if(matches!(idx, 48 | 49), "hopelessness");
    tags
}

/// The production-shaped entry stream.
pub fn production_entries() -> Vec<FixtureEntry> {
    const ENABLED_USERS: [&str; 6] = ["u01", "u02", "u03", "u04", "u05", "u06"];
    const DISABLED_USERS: [&str; 4] = ["u07", "u08", "u09", "u10"];
    // Released rule-2 entries: (index, a, m, confidence).
    const R2: [(usize, f64, f64, f64); 5] = [
        (1, 4.5, 4.6, 0.88),
        (2, 4.6, 4.7, 0.91),
        (3, 4.7, 4.5, 0.83),
        (4, 4.5, 4.5, 0.86),
        (5, 4.6, 4.6, 0.90),
    ];

    (0..68)
        .map(|idx| {
            let (user, seq) = if idx < 36 {
                (ENABLED_USERS[idx % 6], idx / 6)
            } else {
                (DISABLED_USERS[(idx - 36) % 4], (idx - 36) / 4)
            };
            let day = 3 + 9 * seq as u32;
            let sentiment = if idx < 32 {
                ENABLED_NONE_SENTIMENTS[idx]
            } else if idx < 36 {
                ENABLED_SOFT_SENTIMENTS[idx - 32]
            } else {
                DISABLED_SENTIMENTS[idx - 36]
            };
            let tone = band_tone(sentiment);

            let (a, m) = if let Some(&(_, a, m, _)) = R2.iter().find(|(i, ..)| *i == idx) {
                (a, m)
            } else {
                match idx {
                    32 => (1.9, 2.8),
                    33 => (1.7, 2.5),
                    34 => (2.7, 2.8),
                    35 => (2.6, 2.4),
                    _ => (
                        2.7 + ((idx * 7) % 14) as f64 * 0.1,
                        2.5 + ((idx * 5) % 16) as f64 * 0.1,
                    ),
                }
            };

            let text = match idx {
                0 => "오늘은 내 철학대로 살기로 했다. 마음이 가볍고 행복하다.",
                2 => "새 프로젝트에 완전히 몰입했다. 아이디어가 쏟아진다.",
                _ => band_text(tone, day),
            };

            let mut tags = production_predefined(idx);
            for name in production_customs(idx) {
                tags.push(custom(name));
            }

            let mut e = entry(user, day, a, m, sentiment, tone, text)
                .with_tags(tags)
                .with_slip(idx < 36);
            if let Some(&(_, _, _, conf)) = R2.iter().find(|(i, ..)| *i == idx) {
                e = e.with_classification("engaged-flow", conf);
            }
            if idx == 32 {
                e = e.with_classification("low-engagement", 0.76);
            }
            e
        })
        .collect()
}

/// Single-entry case files: the phantom-keyword false positive, the
/// released flow entry, and the post-episode crash.
pub fn case_entries() -> Vec<(&'static str, FixtureEntry)> {
    let production = production_entries();
    let battery = builtin_battery(Variant::Base);
    let case_a = production[2].clone();
    let case_b = production[0].clone();
    let case_c = battery
        .get(PersonaId::A)
        .expect("persona A present")
        .entries
        .iter()
        .find(|e| e.day == 20)
        .expect("day 20 present")
        .clone();
    vec![
        ("case_a.json", case_a),
        ("case_b.json", case_b),
        ("case_c_day20.json", case_c),
    ]
}

/// Materialize every built-in fixture file under `root`. Returns the paths
/// written, in a fixed order.
pub fn write_builtin_fixtures(root: &Path) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for variant in Variant::ALL {
        let set = builtin_battery(variant);
        for fixture in &set.personas {
            // Variant dirs only carry the personas the variant changes.
            if variant != Variant::Base
                && fixture.entries == builtin_battery(Variant::Base)
                    .get(fixture.persona)
                    .expect("base persona")
                    .entries
            {
                continue;
            }
            let path = root
                .join("battery")
                .join(variant.as_str())
                .join(fixture.persona.file_name());
            crate::fixture::write_entries_jsonl(&path, &fixture.entries)?;
            written.push(path);
        }
    }
    let production_path = root.join("production").join("entries.jsonl");
    crate::fixture::write_entries_jsonl(&production_path, &production_entries())?;
    written.push(production_path);

    for (name, entry) in case_entries() {
        let path = root.join("cases").join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut body = serde_json::to_string_pretty(&entry).expect("case serializes");
        body.push('\n');
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
