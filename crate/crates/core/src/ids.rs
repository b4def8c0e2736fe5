//! Node identifiers. Users and items live in separate dense id spaces
//! starting at zero; the type distinguishes them.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct UserId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ItemId(pub u32);

impl UserId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two node classes of a bipartite rating graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Modality {
    User,
    Item,
}

impl Modality {
    pub fn opposite(self) -> Modality {
        match self {
            Modality::User => Modality::Item,
            Modality::Item => Modality::User,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::User => write!(f, "user"),
            Modality::Item => write!(f, "item"),
        }
    }
}

/// Either kind of node, for operations that accept both modalities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Node {
    User(UserId),
    Item(ItemId),
}
