use serde::{Deserialize, Serialize};

/// Feedback color, ordered from best to worst.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NotationColor {
    Green,
    Yellow,
    Red,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Glyph {
    Cross,
    Check,
    None,
}

/// The badge shown to the operator. Green always carries a check and red
/// always carries a cross.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNotation")]
pub struct NotationState {
    color: NotationColor,
    glyph: Glyph,
    message: String,
}

#[derive(Deserialize)]
struct RawNotation {
    color: NotationColor,
    glyph: Glyph,
    message: String,
}

impl TryFrom<RawNotation> for NotationState {
    type Error = String;

    fn try_from(raw: RawNotation) -> Result<Self, Self::Error> {
        NotationState::new(raw.color, raw.glyph, raw.message)
    }
}

impl NotationState {
    pub fn new(
        color: NotationColor,
        glyph: Glyph,
        message: impl Into<String>,
    ) -> Result<Self, String> {
        let consistent = match color {
            NotationColor::Green => glyph == Glyph::Check,
            NotationColor::Red => glyph == Glyph::Cross,
            NotationColor::Yellow => glyph != Glyph::Check,
        };
        if !consistent {
            return Err(format!("{color:?} notation cannot carry a {glyph:?} glyph"));
        }
        Ok(Self {
            color,
            glyph,
            message: message.into(),
        })
    }

    pub fn red_cross(message: impl Into<String>) -> Self {
        Self::new(NotationColor::Red, Glyph::Cross, message).unwrap()
    }

    pub fn yellow_cross(message: impl Into<String>) -> Self {
        Self::new(NotationColor::Yellow, Glyph::Cross, message).unwrap()
    }

    pub fn green_check(message: impl Into<String>) -> Self {
        Self::new(NotationColor::Green, Glyph::Check, message).unwrap()
    }

    pub fn color(&self) -> NotationColor {
        self.color
    }

    pub fn glyph(&self) -> Glyph {
        self.glyph
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn is_green(&self) -> bool {
        self.color == NotationColor::Green
    }
}
