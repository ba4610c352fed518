namespace apm {}
