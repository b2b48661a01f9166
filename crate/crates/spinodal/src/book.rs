// Guide chapters are attached as doctests in a later pass.
