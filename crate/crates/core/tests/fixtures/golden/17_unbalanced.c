int broken(void) {
	if (x) {
		y();
@
