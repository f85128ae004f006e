size_t home_length(void)
{
    const char *home = getenv("HOME");
    size_t n = home ? strlen(home) : 0;
    return n;
}
