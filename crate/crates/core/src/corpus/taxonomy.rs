//! Closed group vocabularies for the two occupation taxonomies.
//!
//! Both enums serialize to their short label (the abbreviation column of the
//! group tables) and parse from either the short label or the full title,
//! case-insensitively.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {taxonomy} major group {value:?}")]
pub struct UnknownGroup {
    pub taxonomy: Taxonomy,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taxonomy {
    Isco,
    Soc,
}

impl fmt::Display for Taxonomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Taxonomy::Isco => "ISCO",
            Taxonomy::Soc => "SOC",
        })
    }
}

impl FromStr for Taxonomy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "isco" | "isco-08" => Ok(Taxonomy::Isco),
            "soc" | "soc-2018" => Ok(Taxonomy::Soc),
            other => Err(format!("unknown taxonomy {other:?}")),
        }
    }
}

macro_rules! group_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $taxonomy:expr, {
            $($variant:ident => ($short:literal, $title:literal)),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn short(self) -> &'static str {
                match self {
                    $($name::$variant => $short),+
                }
            }

            pub fn title(self) -> &'static str {
                match self {
                    $($name::$variant => $title),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.short())
            }
        }

        impl FromStr for $name {
            type Err = UnknownGroup;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let needle = s.trim();
                $name::ALL
                    .iter()
                    .copied()
                    .find(|g| {
                        g.short().eq_ignore_ascii_case(needle)
                            || g.title().eq_ignore_ascii_case(needle)
                    })
                    .ok_or_else(|| UnknownGroup {
                        taxonomy: $taxonomy,
                        value: s.to_string(),
                    })
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.short())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let raw = String::deserialize(deserializer)?;
                raw.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

group_enum! {
    /// ISCO-08 major groups.
    IscoMajor, Taxonomy::Isco, {
        Managers => ("Managers", "Managers"),
        Professionals => ("Professionals", "Professionals"),
        Technicians => ("Technicians", "Technicians and Associate Professionals"),
        Clerical => ("Clerical", "Clerical Support Workers"),
        Service => ("Service", "Service and Sales Workers"),
        Agricultural => ("Agricultural", "Skilled Agricultural, Forestry, and Fishery Workers"),
        Trades => ("Trades", "Craft and Related Workers"),
        MachineOperators => ("Machine Operators", "Plant Machine Operators and Assemblers"),
        Elementary => ("Elementary", "Elementary Operators"),
        ArmedForces => ("Armed Forces", "Armed Forces Occupations"),
    }
}

group_enum! {
    /// SOC 2018 major groups as abbreviated in the occupation tables.
    SocMajor, Taxonomy::Soc, {
        Management => ("Man.", "Management"),
        Business => ("Bus.", "Business and Financial Operations"),
        Computer => ("Comp.", "Computer and Mathematical"),
        Architecture => ("Arch.", "Architecture and Engineering"),
        LifePhysical => ("Eng.", "Life and Physical Engineering"),
        Community => ("Soc.", "Community and Social Service"),
        Legal => ("Leg.", "Legal"),
        Education => ("Edu.", "Education Training and Library"),
        Arts => ("Art.", "Arts, Design, Entertainment, Sports and Media"),
        Healthcare => ("Hea.", "Healthcare Practitioners and Technical"),
        HealthSupport => ("Hea. Sup.", "Health Practitioner Support Technologists and Technicians"),
        Service => ("Ser.", "Service"),
        Food => ("Food", "Food Preparation"),
        Building => ("Bui.", "Building and Grounds Cleaning and Management"),
        PersonalCare => ("Per.", "Personal Care and Service"),
        Sales => ("Sal.", "Sales and Office"),
        Office => ("Off.", "Office Administration Support"),
        Farming => ("Far.", "Farming, Fishing and Forestry"),
        Transportation => ("Trans.", "Transportation and Material Moving"),
        Construction => ("Cons.", "Construction and Extraction"),
        Maintenance => ("Main.", "Installation, Maintenance, and Repair"),
    }
}

/// A major group in either taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MajorGroup {
    Isco(IscoMajor),
    Soc(SocMajor),
}

impl MajorGroup {
    pub fn taxonomy(self) -> Taxonomy {
        match self {
            MajorGroup::Isco(_) => Taxonomy::Isco,
            MajorGroup::Soc(_) => Taxonomy::Soc,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            MajorGroup::Isco(g) => g.short(),
            MajorGroup::Soc(g) => g.short(),
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            MajorGroup::Isco(g) => g.title(),
            MajorGroup::Soc(g) => g.title(),
        }
    }

    pub fn parse(taxonomy: Taxonomy, s: &str) -> Result<Self, UnknownGroup> {
        match taxonomy {
            Taxonomy::Isco => s.parse().map(MajorGroup::Isco),
            Taxonomy::Soc => s.parse().map(MajorGroup::Soc),
        }
    }

    /// Every group of a taxonomy in table order.
    pub fn all(taxonomy: Taxonomy) -> Vec<MajorGroup> {
        match taxonomy {
            Taxonomy::Isco => IscoMajor::ALL
                .iter()
                .copied()
                .map(MajorGroup::Isco)
                .collect(),
            Taxonomy::Soc => SocMajor::ALL.iter().copied().map(MajorGroup::Soc).collect(),
        }
    }
}
