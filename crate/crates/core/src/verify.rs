//! Cross-route verification suite.
