int midpoint(int lo, int hi)
{
    if (lo > hi)
        return -1;
    int avg = lo + (hi - lo) / 2;
    return avg;
}
