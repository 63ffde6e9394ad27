//! Name-keyed registries of interchangeable implementations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Something selectable by name at runtime.
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Boxed strategies indexed by name; iteration is in name order.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: Named + ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: BTreeMap::new() }
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register(&mut self, item: Box<T>) -> &mut Self {
        self.entries.insert(item.name(), item);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hi".into()
        }
    }

    #[test]
    fn lookup_by_name() {
        let mut r: Registry<dyn Greeter> = Registry::new("greeter");
        r.register(Box::new(Hello));
        assert_eq!(r.get("hello").unwrap().greet(), "hi");
        assert_eq!(r.names(), vec!["hello"]);
        let err = r.get("bye").err().unwrap();
        assert!(err.to_string().contains("available: hello"));
    }
}
