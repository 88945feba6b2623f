int gazefit_placeholder_test_io = 0;
